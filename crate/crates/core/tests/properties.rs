use std::sync::OnceLock;

use maass_core::exact::rational::rat;
use maass_core::lift::*;
use maass_core::modforms::{level1_eigenform, plus_eigenform, EigenformHalf};
use maass_core::quadform::enumerate_forms;
use maass_core::siegel::local::product_matches;
use maass_core::siegel::{CapabilityTable, LocalSiegelData};
use proptest::prelude::*;

struct Genus4 {
    g: EigenformHalf,
    tables: LiftTables,
}

fn genus4() -> &'static Genus4 {
    static CELL: OnceLock<Genus4> = OnceLock::new();
    CELL.get_or_init(|| {
        let g = plus_eigenform(6, 60).unwrap();
        let f = level1_eigenform(12, 20).unwrap();
        let tables = lift_table(4, &g, &f, 32, &CapabilityTable::default()).unwrap();
        Genus4 { g, tables }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn square_shift_preserves_the_relations(num in -50i64..50, den in 1i64..20) {
        let data = genus4();
        let c = MaassParameter::from_eigenform(&data.g, 32).unwrap();
        let shifted = square_shift(&c, &rat(num, den));
        prop_assert!(maass_verify(&data.tables.route_b, &shifted, &data.tables.classes).unwrap().pass);
    }

    #[test]
    fn perturbed_entry_is_detected(pick in any::<prop::sample::Index>(), delta in 1i64..100) {
        let data = genus4();
        let mut table = data.tables.route_b.clone();
        let h = pick.get(&table.iter().map(|(h, _)| h.clone()).collect::<Vec<_>>()).clone();
        let v = table.get(&h).unwrap() + rat(delta, 7);
        table.set(&h, v).unwrap();
        let c = MaassParameter::from_eigenform(&data.g, 32).unwrap();
        let r = maass_verify(&table, &c, &data.tables.classes).unwrap();
        prop_assert!(!r.pass);
        prop_assert_eq!(r.failures.len(), 1);
        prop_assert_eq!(&r.failures[0].0, &h.encoding());
    }

    #[test]
    fn local_polynomial_structure(pick in any::<prop::sample::Index>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let forms = enumerate_forms(2, 48).unwrap();
        let h = pick.get(&forms);
        let caps = CapabilityTable::default();
        let ld = LocalSiegelData::compute(h, p, Some(caps.j_max(2, p).unwrap()), &caps).unwrap();
        prop_assert!(product_matches(&ld));
        prop_assert!(ld.ftilde.is_symmetric());
        prop_assert_eq!(ld.f_coeffs.len() as u32, 2 * ld.fp + 1);
        prop_assert_eq!(ld.f_coeffs[0].clone(), 1.into());
    }
}
