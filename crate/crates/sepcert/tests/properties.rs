//! Property tests for the kernel and state-construction invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use sepcert::cmatrix::{
    frobenius_distance, hermitian_eigen, kron, min_eigenvalue, partial_transpose, psd_sqrt, CMatrix,
};
use sepcert::sep::cauchy_schwarz_scan;
use sepcert::sgws::{build_sgws, critical_v, validate_coeffs, SgwsSpec};
use sepcert::CMatrix64;

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn square_matrix(n: usize) -> impl Strategy<Value = CMatrix64> {
    proptest::collection::vec(complex_entry(), n * n)
        .prop_map(move |entries| CMatrix::new(n, n, entries).unwrap())
}

fn hermitian_matrix(n: usize) -> impl Strategy<Value = CMatrix64> {
    square_matrix(n).prop_map(|m| m.hermitize())
}

/// Entries k/16 with small k: all products of three entries are exact in f64.
fn dyadic_matrix(n: usize) -> impl Strategy<Value = CMatrix64> {
    let entry = (-16i32..17, -16i32..17)
        .prop_map(|(re, im)| Complex64::new(re as f64 / 16.0, im as f64 / 16.0));
    proptest::collection::vec(entry, n * n)
        .prop_map(move |entries| CMatrix::new(n, n, entries).unwrap())
}

/// Random density matrix: G G† normalized to unit trace.
fn density_matrix(n: usize) -> impl Strategy<Value = CMatrix64> {
    square_matrix(n).prop_map(|g| {
        let p = g.matmul(&g.adjoint()).hermitize();
        let t = p.trace().re;
        p.scale(1.0 / t)
    })
}

fn normalized_alpha(d: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec(complex_entry(), d).prop_filter_map(
        "usable coefficient vector",
        |alpha| {
            let norm = alpha.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return None;
            }
            let alpha: Vec<Complex64> = alpha.into_iter().map(|z| z / norm).collect();
            let nonzero = alpha.iter().filter(|z| z.norm() > 1e-6).count();
            (nonzero >= 2).then_some(alpha)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigen_reconstructs_and_is_orthonormal(m in (2usize..10).prop_flat_map(hermitian_matrix)) {
        let n = m.rows();
        let eig = hermitian_eigen(&m).unwrap();
        let v = &eig.eigenvectors;
        let rec = v.matmul(&CMatrix::from_diag(&eig.eigenvalues)).matmul(&v.adjoint());
        let scale = 1f64.max(m.frobenius_norm());
        prop_assert!(frobenius_distance(&rec, &m).unwrap() <= 1e-10 * scale);
        let gram = v.adjoint().matmul(v);
        prop_assert!(frobenius_distance(&gram, &CMatrix::identity(n)).unwrap() <= 1e-10);
        // ascending order
        for w in eig.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn partial_transpose_is_involution_and_trace_preserving(
        m in square_matrix(8),
        subset_mask in 1usize..7,
    ) {
        let dims = [2usize, 2, 2];
        let subset: Vec<usize> = (0..3).filter(|b| subset_mask & (1 << b) != 0).map(|b| b + 1).collect();
        prop_assume!(subset.len() < 3);
        let pt = partial_transpose(&m, &dims, &subset).unwrap();
        let back = partial_transpose(&pt, &dims, &subset).unwrap();
        // exact permutation: bit-identical entries
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(pt.trace(), m.trace());
    }

    #[test]
    fn kron_is_associative_exactly_on_exact_products(
        a in dyadic_matrix(2),
        b in dyadic_matrix(2),
        c in dyadic_matrix(3),
    ) {
        // with few-bit dyadic entries every scalar product is exact, so the
        // two association orders must agree bit for bit
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kron_is_associative_to_rounding_on_general_entries(
        a in square_matrix(2),
        b in square_matrix(2),
        c in square_matrix(3),
    ) {
        // scalar multiplication itself is only associative up to one ulp
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!(frobenius_distance(&left, &right).unwrap() <= 1e-14);
    }

    #[test]
    fn psd_sqrt_squares_back(p in density_matrix(5)) {
        let s = psd_sqrt(&p).unwrap();
        let rebuilt = s.matmul(&s);
        let scale = 1f64.max(p.frobenius_norm());
        prop_assert!(frobenius_distance(&rebuilt, &p).unwrap() <= 1e-9 * scale);
        prop_assert!(min_eigenvalue(&s).unwrap() >= -1e-10);
    }

    #[test]
    fn product_states_pass_the_pairwise_scan(
        a in density_matrix(2),
        b in density_matrix(2),
    ) {
        // the scan checks a necessary condition for separability, so a
        // product state can never violate it
        let rho = kron(&a, &b).unwrap();
        let violations = cauchy_schwarz_scan(&rho, &[2, 2]).unwrap();
        prop_assert!(violations.is_empty());
    }

    #[test]
    fn random_coefficients_obey_threshold_bounds(alpha in normalized_alpha(3)) {
        let cv = validate_coeffs(&alpha).unwrap();
        // |alpha_i alpha_j| <= 1/2 forces T >= 2
        prop_assert!(cv.t_value() >= 2.0 - 1e-9);
        for n in [2usize, 3] {
            let v_c = critical_v(&cv, n);
            prop_assert!(v_c > 0.0 && v_c < 1.0);
            let dn = 3f64.powi(n as i32);
            prop_assert!(v_c >= 2.0 / (dn + 2.0) - 1e-12);
        }
    }

    #[test]
    fn sgws_states_are_unit_trace_with_spectral_floor(
        alpha in normalized_alpha(3),
        v in 0.0..1.0f64,
    ) {
        let cv = validate_coeffs(&alpha).unwrap();
        let spec = SgwsSpec::new(cv, 2, v).unwrap();
        let w = build_sgws(&spec);
        prop_assert!((w.trace().re - 1.0).abs() <= 1e-12);
        let min = min_eigenvalue(&w.hermitize()).unwrap();
        prop_assert!(min >= (1.0 - v) / 9.0 - 1e-12);
    }
}

// The whole pipeline also runs in single precision, at that type's
// tolerances.
#[test]
fn f32_pipeline_smoke() {
    use num_complex::Complex;
    use sepcert::sep::{decompose_sgws, verify_decomposition};

    let a = 1.0f32 / 2f32.sqrt();
    let cv = validate_coeffs(&[Complex::new(a, 0.0f32), Complex::new(a, 0.0)]).unwrap();
    assert!((cv.t_value() - 2.0).abs() < 1e-5);
    let v_c = critical_v(&cv, 2);
    assert!((v_c - 1.0 / 3.0).abs() < 1e-5);
    let spec = SgwsSpec::new(cv, 2, v_c * 0.5).unwrap();
    let dec = decompose_sgws(&spec, false).unwrap();
    let record = verify_decomposition(&dec, &build_sgws(&spec)).unwrap();
    assert!(record.pass, "{record:?}");
}
