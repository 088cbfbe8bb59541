use proptest::prelude::*;
use qtoda::json::*;
use qtoda_core::conservation::{build_toda_operator, commutant_search, total_translation, EigenVerdict, OperatorAnsatz};
use qtoda_core::series::solve_jseries;
use qtoda_core::RatFunc;

#[test]
fn series_round_trip() {
    for (r, d) in [(1, 3), (2, 2)] {
        let s = solve_jseries(r, d).unwrap();
        let j = SeriesJson::from_series(&s);
        let text = serde_json::to_string(&j).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_series().unwrap(), s);
        assert_eq!(first_difference(&s, &back.to_series().unwrap()), None);
    }
}

#[test]
fn malformed_series_is_rejected_with_the_cell() {
    let s = solve_jseries(1, 1).unwrap();
    let mut j = SeriesJson::from_series(&s);
    j.coefficients[1].den = "0".into();
    assert!(j.to_series().is_err());
    let mut j = SeriesJson::from_series(&s);
    j.coefficients[2].num = "1+".into();
    let e = j.to_series().unwrap_err();
    assert!(e.contains("[1]"), "{e}");
    let mut j = SeriesJson::from_series(&s);
    let extra = j.coefficients[0].clone();
    j.coefficients.push(extra);
    assert!(j.to_series().unwrap_err().starts_with("duplicate"));
    let mut j = SeriesJson::from_series(&s);
    j.coefficients.push(CellJson {
        degree: vec![5],
        sigma: vec![0, 1],
        num: "1".into(),
        den: "1".into(),
    });
    assert!(j.to_series().unwrap_err().starts_with("unexpected"));
}

#[test]
fn operator_round_trip() {
    for op in [build_toda_operator(2).unwrap(), total_translation(3)] {
        let j = OperatorJson::from_operator(&op);
        let text = serde_json::to_string(&j).unwrap();
        let back: OperatorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_operator().unwrap(), op);
    }
    let c = commutant_search(&OperatorAnsatz::binary(2, 1)).unwrap();
    for op in &c.operators {
        assert_eq!(&OperatorJson::from_operator(op).to_operator().unwrap(), op);
    }
}

#[test]
fn toda_operator_serialization() {
    let j = OperatorJson::from_operator(&build_toda_operator(1).unwrap());
    let v = serde_json::to_value(&j).unwrap();
    assert_eq!(v["rank"], 1);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[1]["shift"], serde_json::json!([1, 0]));
    assert_eq!(terms[1]["coeff"]["1"], "1");
}

#[test]
fn eigen_json_statuses() {
    let ok = EigenJson::from(&EigenVerdict::Eigenvalue {
        value: RatFunc::one(),
        checked_to: 3,
    });
    assert_eq!((ok.status.as_str(), ok.eigenvalue.as_deref(), ok.checked_to), ("eigenfunction", Some("1"), Some(3)));
    let bad = EigenJson::from(&EigenVerdict::Mismatch {
        sigma: vec![1, 0],
        degree: vec![2],
    });
    assert_eq!(bad.status, "mismatch");
    assert_eq!(bad.failing_degree, Some(vec![2]));
}

#[test]
fn bad_monomial_keys() {
    assert!(parse_q_monomial_key("Q3", 2).is_err());
    assert!(parse_q_monomial_key("P1", 2).is_err());
    assert!(parse_q_monomial_key("Q1^x", 2).is_err());
    assert_eq!(parse_q_monomial_key("Q1*Q1", 2).unwrap(), vec![2, 0]);
}

proptest! {
    #[test]
    fn q_monomial_keys_round_trip(a in prop::collection::vec(-3i32..=3, 1..5)) {
        let key = q_monomial_key(&a);
        prop_assert_eq!(parse_q_monomial_key(&key, a.len()).unwrap(), a);
    }
}
