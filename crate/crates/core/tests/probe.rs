use heights_core::elliptic::divisor::EDivisor;
use heights_core::elliptic::{Curve, EBiextPoint, FormalGroup, Point};
use heights_core::padic::PadicNumber;

#[test]
fn probe_psi_formal_steps() {
    let e = Curve::from_i64(5, 26, -1, 1).unwrap();
    let fg = FormalGroup::new(&e, 16).unwrap();
    let pt = |x: i64, y: i64| Point::Affine {
        x: PadicNumber::from_i64(x, 5, 26),
        y: PadicNumber::from_i64(y, 5, 26),
    };
    let p1 = pt(1, 1);
    let q1 = pt(3, 5);
    let y = EBiextPoint::canonical(&e, &p1, &q1, PadicNumber::from_i64(2, 5, 26)).unwrap();
    let y1 = y.mul2(&e, 8).unwrap().mul1(&e, 8).unwrap();
    let np = y1.first_class().clone();
    let nq = y1.second_class().clone();
    println!("np formal {} nq formal {}", e.is_formal(&np), e.is_formal(&nq));
    let neg_nq = e.neg(&nq);
    let dq_target = EDivisor::new(vec![(Point::Infinity, 1), (neg_nq.clone(), -1)]);
    // dp target from a formal aux point
    let w = fg.point_from_t(&PadicNumber::from_i64(5, 5, 26)).unwrap();
    let npw = e.add(&np, &w).unwrap();
    let dp_target = EDivisor::new(vec![(npw.clone(), 1), (w.clone(), -1)]);
    println!("indep: class(dq_cur) == nQ: {}", y1.dq().class_sum(&e).unwrap() == nq);
    println!("indep: class(dq_target) == nQ: {}", dq_target.class_sum(&e).unwrap() == nq);
    let s1 = y1.with_dp_representative(&e, &dp_target);
    println!("dp transport: {:?}", s1.as_ref().err());
    let s1 = s1.unwrap();
    let s2 = s1.with_dq_representative(&e, &dq_target);
    println!("dq transport: {:?}", s2.as_ref().err());
}
