//! Round-trip of the decomposition document format.

use num_complex::Complex64;
use sepcert::sep::{decompose_sgws, verify_decomposition, ProductDecomposition};
use sepcert::sgws::{build_sgws, critical_v, validate_coeffs, SgwsSpec};

fn paper3() -> sepcert::CoeffVector64 {
    validate_coeffs(&[
        Complex64::new(2.0 / 3.0, 0.0),
        Complex64::new(2.0 / 3.0, 0.0),
        Complex64::new(1.0 / 3.0, 0.0),
    ])
    .unwrap()
}

#[test]
fn json_round_trip_preserves_every_bit() {
    let cv = paper3();
    let v = critical_v(&cv, 2) * 0.7;
    let spec = SgwsSpec::new(cv, 2, v).unwrap();
    let dec = decompose_sgws(&spec, false).unwrap();
    let text = dec.to_json_string().unwrap();
    let back = ProductDecomposition::<f64>::from_json_str(&text).unwrap();
    assert_eq!(back.d, dec.d);
    assert_eq!(back.n_parties, dec.n_parties);
    assert_eq!(back.len(), dec.len());
    for (a, b) in dec.terms.iter().zip(&back.terms) {
        assert_eq!(a.weight.to_bits(), b.weight.to_bits());
        for (fa, fb) in a.factors.iter().zip(&b.factors) {
            for (x, y) in fa.entries().iter().zip(fb.entries()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }
    // the reparsed decomposition still verifies against the state
    let record = verify_decomposition(&back, &build_sgws(&spec)).unwrap();
    assert!(record.pass);
}

#[test]
fn document_shape_is_the_published_schema() {
    let cv = paper3();
    let spec = SgwsSpec::new(cv, 2, 0.1).unwrap();
    let dec = decompose_sgws(&spec, false).unwrap();
    let text = dec.to_json_string().unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["d"], 3);
    assert_eq!(value["N"], 2);
    let terms = value["terms"].as_array().unwrap();
    assert_eq!(terms.len(), dec.len());
    let first = &terms[0];
    assert!(first["weight"].is_number());
    let factors = first["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 2);
    assert_eq!(factors[0].as_array().unwrap().len(), 9); // 3x3 row-major
    assert_eq!(factors[0][0].as_array().unwrap().len(), 2); // [re, im]
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(ProductDecomposition::<f64>::from_json_str("{}").is_err());
    let bad = r#"{"d": 2, "N": 2, "terms": [{"weight": 1.0, "factors": [[[1.0, 0.0]]]}]}"#;
    assert!(ProductDecomposition::<f64>::from_json_str(bad).is_err());
}
