use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::Rational64;
use partfrac::numeric::parcel_value;
use partfrac::oracle::{build_table, restricted_count, PartitionTable, RestrictedQuery};
use partfrac::quasi::{Affine, QuasiPoly2};
use partfrac::recurrence::{derive_recurrence, verify, CatalogRecord, Recurrence};
use partfrac::symbolic::{evaluate_form, expand_symbolic, shift_form, ValidRange};
use partfrac::trace::build_trace;
use partfrac::variant::TailVariant;
use proptest::prelude::*;

fn table() -> &'static PartitionTable {
    static TABLE: OnceLock<PartitionTable> = OnceLock::new();
    TABLE.get_or_init(|| build_table(200).unwrap())
}

fn restricted(m: usize, k: usize) -> BigUint {
    restricted_count(RestrictedQuery::new(m, k)).unwrap()
}

fn variant() -> impl Strategy<Value = TailVariant> {
    prop::sample::select(TailVariant::ALL.to_vec())
}

fn affine() -> impl Strategy<Value = Affine> {
    (-20i64..20, 1i64..4, -6i64..6, 1i64..4)
        .prop_map(|(c, cd, s, sd)| Affine::new(Rational64::new(c, cd), Rational64::new(s, sd)))
}

fn quasi() -> impl Strategy<Value = QuasiPoly2> {
    (affine(), affine()).prop_map(|(e, o)| QuasiPoly2::new(e, o))
}

proptest! {
    #[test]
    fn restricted_is_monotone_in_k(m in 0usize..120, k in 0usize..120) {
        prop_assert!(restricted(m, k) <= restricted(m, k + 1));
    }

    #[test]
    fn restricted_small_parts(m in 0usize..500) {
        prop_assert_eq!(restricted(m, 1), BigUint::from(1u32));
        prop_assert_eq!(restricted(m, 2), BigUint::from((m + 2) / 2));
    }

    #[test]
    fn restricted_saturates_at_p(m in 0usize..150, extra in 0usize..20) {
        prop_assert_eq!(&restricted(m, m + extra), &table()[m]);
    }

    #[test]
    fn parcel_is_restricted_count(head in 1usize..=60, frac in 0.0f64..1.0) {
        let tab = ((head as f64) * frac) as usize;
        let parcel = parcel_value(tab, head, table()).unwrap();
        prop_assert_eq!(parcel, restricted(tab, head - tab));
    }

    #[test]
    fn all_tail_variants_total_p(n in 2usize..40, v in variant()) {
        let doc = build_trace(n, v).unwrap();
        prop_assert_eq!(&doc.total, &table()[n]);
    }

    #[test]
    fn quasi_shift_is_pointwise(q in quasi(), d in -5i64..5, n in -40i64..40) {
        prop_assert_eq!(q.shifted(d).at(n), q.at(n - d));
    }

    #[test]
    fn quasi_arithmetic_is_pointwise(a in quasi(), b in quasi(), n in -40i64..40) {
        prop_assert_eq!((a + b).at(n), a.at(n) + b.at(n));
        prop_assert_eq!((a - b).at(n), a.at(n) - b.at(n));
    }

    #[test]
    fn quasi_serde_round_trip(q in quasi()) {
        let text = serde_json::to_string(&q).unwrap();
        prop_assert_eq!(serde_json::from_str::<QuasiPoly2>(&text).unwrap(), q);
    }

    #[test]
    fn expansion_holds_on_claimed_range(cap in 3usize..40, v in variant()) {
        let form = expand_symbolic(cap, v).unwrap();
        let claimed = form.claimed().unwrap();
        for n in claimed.iter() {
            let rhs = evaluate_form(&form, n as i64, table()).unwrap();
            prop_assert_eq!(rhs, BigInt::from(table()[n].clone()), "n = {}", n);
        }
    }

    #[test]
    fn shifted_form_tracks_previous_value(cap in 3usize..40, v in variant(), d in 1usize..4) {
        let form = expand_symbolic(cap, v).unwrap();
        let shifted = shift_form(&form, d);
        for n in (form.claimed().unwrap().lo + d)..=(cap + d) {
            prop_assert_eq!(
                evaluate_form(&shifted, n as i64, table()).unwrap(),
                evaluate_form(&form, (n - d) as i64, table()).unwrap()
            );
        }
    }

    #[test]
    fn derivation_is_difference_of_expansions(
        cap in 3usize..=30,
        pn in variant(),
        pn1 in variant(),
        n in 0i64..60,
    ) {
        let rec = derive_recurrence(cap, pn, pn1).unwrap();
        let a = expand_symbolic(cap, pn).unwrap();
        let b = shift_form(&expand_symbolic(cap - 1, pn1).unwrap(), 1);
        // p(n) - p(n-1) = a - b, so p(n) = p(n-1) + a - b as formal sums.
        let p_prev = table().get(n - 1).map(|v| BigInt::from(v.clone())).unwrap_or_default();
        let want = p_prev + evaluate_form(&a, n, table()).unwrap() - evaluate_form(&b, n, table()).unwrap();
        prop_assert_eq!(evaluate_form(rec.rhs(), n, table()).unwrap(), want);
    }

    #[test]
    fn derived_recurrences_hold_on_claim(cap in 3usize..=30, pn in variant(), pn1 in variant()) {
        let rec = derive_recurrence(cap, pn, pn1).unwrap();
        let report = verify(&rec, rec.claimed(), table()).unwrap();
        prop_assert!(report.claim_holds(), "{} fails at {:?}", rec, report.first_failure);
    }

    #[test]
    fn canonical_key_ignores_term_order(
        terms in prop::collection::btree_map(1usize..40, -3i64..=3, 1..10),
        seed in any::<u64>(),
    ) {
        let mut listed: Vec<(usize, i64)> = terms.into_iter().collect();
        let claimed = ValidRange::new(2, 10);
        let a = Recurrence::external(listed.clone(), QuasiPoly2::ZERO, claimed).unwrap();
        let len = listed.len();
        listed.rotate_left((seed as usize) % len);
        let b = Recurrence::external(listed, QuasiPoly2::ZERO, claimed).unwrap();
        prop_assert_eq!(a.canonical_key(), b.canonical_key());
    }

    #[test]
    fn catalog_record_round_trip(cap in 3usize..=24, pn in variant(), pn1 in variant()) {
        let rec = derive_recurrence(cap, pn, pn1).unwrap();
        let record = CatalogRecord {
            key: rec.canonical_key(),
            coefficients: rec.rhs().coeffs().clone(),
            tail: *rec.tail(),
            claimed: rec.claimed(),
            empirical: None,
            provenance: rec.provenance().to_vec(),
            classification: None,
        };
        let back = CatalogRecord::from_line(&record.to_line()).unwrap().to_recurrence().unwrap();
        prop_assert_eq!(back.canonical_key(), rec.canonical_key());
        prop_assert_eq!(back.claimed(), rec.claimed());
    }
}
