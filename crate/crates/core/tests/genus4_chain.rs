use maass_core::exact::rational::int;
use maass_core::lift::maass::square_direction;
use maass_core::lift::*;
use maass_core::modforms::{level1_eigenform, plus_eigenform, NewformPlusTable};
use maass_core::quadform::{find_prime_disc_form, is_maximal};
use maass_core::siegel::CapabilityTable;

#[test]
fn lift_relations_and_jacobi_coefficients() {
    let bound = 64;
    let g = plus_eigenform(6, 200).unwrap();
    let f = level1_eigenform(12, 30).unwrap();
    let lt = lift_table(4, &g, &f, bound, &CapabilityTable::default()).unwrap();
    assert!(lt.mismatches().is_empty(), "{:?}", lt.mismatches());

    let c = MaassParameter::from_eigenform(&g, bound).unwrap();
    assert!(maass_verify(&lt.route_b, &c, &lt.classes).unwrap().pass);
    let shifted = square_shift(&c, &int(-3));
    assert!(maass_verify(&lt.route_b, &shifted, &lt.classes).unwrap().pass);

    let sol = maass_solve(&lt.route_b, 6, bound, &lt.classes).unwrap();
    assert_eq!(sol.kind, SolutionKind::Affine);
    assert_eq!(sol.kernel_exact.len(), 1);
    let dir = square_direction(&sol.indices, 6);
    let kernel = &sol.kernel_exact[0];
    let i = dir.iter().position(|x| *x != int(0)).unwrap();
    let ratio = &kernel[i] / &dir[i];
    assert!(kernel.iter().zip(&dir).all(|(a, b)| *a == &ratio * b));

    for p in [2u64, 3, 5, 7] {
        let b = find_prime_disc_form(p, 3).unwrap();
        let s = b.lattice();
        assert!(is_maximal(&s), "{b}");
        let fj = fj_extract(&lt.route_b, &s, bound).unwrap();
        assert!(!fj.entries.is_empty());
        assert!(mtype_check(&fj).ok, "p = {p}");
        let built = phi_bgh(&b, &g, &NewformPlusTable::zero(6, p, 1, 0), bound).unwrap();
        assert_eq!(built, fj, "p = {p}");
        for (key, v) in &fj.entries {
            assert_eq!(&thm31_coeff(&s, &g, &f, key, 1, 1).unwrap(), v, "p = {p}, key {key:?}");
        }
        let r = lemma44_check(&lt.route_b, &b, &c, bound, &lt.classes).unwrap();
        assert!(r.pass(), "p = {p}: {:?}", r.failures);
        assert_eq!(r.eta, -1);
    }
}
