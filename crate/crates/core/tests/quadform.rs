mod common;

use common::*;
use proptest::prelude::*;
use quadstat_core::distributions::NoncentralChiSquare;
use quadstat_core::linalg::{max_abs, Matrix, Vector};
use quadstat_core::quadform::*;
use quadstat_core::validation::{kolmogorov_distance, kolmogorov_distance_monotone};
use quadstat_core::Error;

fn trace_powers(form: &GaussianQuadraticForm) -> (f64, f64) {
    let m = form.a() * form.sigma();
    (m.trace(), (&m * &m).trace())
}

fn weights_cumulants_match(form: &GaussianQuadraticForm, w: &WeightedChiSquareForm, tol: f64) -> Result<(), String> {
    let direct = cumulants(form).kappa;
    let from_w = w.cumulants().kappa;
    for v in 0..4 {
        let scale = direct[v].abs().max(from_w[v].abs()).max(1e-300);
        if (direct[v] - from_w[v]).abs() > tol * scale.max(direct[1].powf((v + 1) as f64 / 2.0)) {
            return Err(format!("kappa{}: {} vs {}", v + 1, direct[v], from_w[v]));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn offsets_cancel_for_nonsingular_sigma(seed in any::<u64>(), k in 1usize..=8, scale in 0.1f64..5.0) {
        let mut r = rng(seed);
        let a = random_symmetric(&mut r, k);
        let mu = random_vector(&mut r, k, scale);
        let sigma = random_spd(&mut r, k);
        let form = GaussianQuadraticForm::new(a, mu, sigma).unwrap();
        let (_, w) = spectral_reduce(&form, DEFAULT_RANK_TOL).unwrap();
        prop_assert!(w.c.abs() <= 1e-8 * (form.mean_value().abs() + 1.0), "c = {}", w.c);
        prop_assert!(weights_cumulants_match(&form, &w, 1e-9).is_ok());
    }

    #[test]
    fn central_forms_have_zero_offsets(seed in any::<u64>(), k in 2usize..=9) {
        let mut r = rng(seed);
        let p = random_simplex(&mut r, k, 0.01);
        let form = GaussianQuadraticForm::central(random_symmetric(&mut r, k), multinomial_cov(&p, 0.02)).unwrap();
        let (ws, w) = spectral_reduce(&form, DEFAULT_RANK_TOL).unwrap();
        prop_assert!(w.b.iter().all(|&b| b == 0.0));
        prop_assert_eq!(w.c, 0.0);
        prop_assert_eq!(ws.r_sigma, k - 1);
    }

    #[test]
    fn workspace_traces_match_matrix_powers(seed in any::<u64>(), k in 1usize..=9, singular in any::<bool>()) {
        let mut r = rng(seed);
        let sigma = if singular {
            multinomial_cov(&random_simplex(&mut r, k.max(2), 0.0), 0.1)
        } else {
            random_spd(&mut r, k)
        };
        let k = sigma.nrows();
        let form = GaussianQuadraticForm::central(random_symmetric(&mut r, k), sigma).unwrap();
        let (ws, _) = spectral_reduce(&form, DEFAULT_RANK_TOL).unwrap();
        let (t1, t2) = trace_powers(&form);
        let w_trace = ws.w.trace();
        let w2_trace = (&ws.w * &ws.w).trace();
        let scale = t2.sqrt();
        prop_assert!((w_trace - t1).abs() <= 1e-10 * t1.abs().max(scale), "{w_trace} vs {t1}");
        prop_assert!((w2_trace - t2).abs() <= 1e-10 * t2);
        let omega_sum: f64 = ws.omega.iter().sum();
        prop_assert!((omega_sum - t1).abs() <= 1e-10 * t1.abs().max(scale));
        // Reconstructions required of the workspace.
        let bbt = &ws.b_matrix * ws.b_matrix.transpose();
        prop_assert!(max_abs(&(bbt - form.sigma())) <= 1e-8 * max_abs(form.sigma()));
        let vov = &ws.v * Matrix::from_diagonal(&Vector::from_vec(ws.omega.clone())) * ws.v.transpose();
        prop_assert!(max_abs(&(vov - &ws.w)) <= 1e-8 * max_abs(&ws.w).max(1e-300));
        prop_assert!(ws.omega.windows(2).all(|p| p[0] >= p[1]));
    }

    #[test]
    fn null_forms_take_the_central_branch(seed in any::<u64>(), k in 2usize..=10) {
        let mut r = rng(seed);
        let p = random_simplex(&mut r, k, 0.005);
        let a = random_psd(&mut r, k, 1 + (seed % k as u64) as usize);
        let form = GaussianQuadraticForm::central(a, multinomial_cov(&p, 1.0 / 40.0)).unwrap();
        let s = four_cum(&form).unwrap();
        prop_assert_eq!(s.delta, 0.0);
        prop_assert!(s.xi.is_none());
        prop_assert!((s.df - 1.0 / s.s1).abs() <= 1e-12 * s.df);
    }

    #[test]
    fn idempotent_whitened_forms_are_exact(seed in any::<u64>(), k in 1usize..=8, rank_frac in 0.0f64..1.0) {
        let mut r = rng(seed);
        let rank = 1 + ((k as f64 * rank_frac) as usize).min(k - 1);
        let sigma = random_spd(&mut r, k);
        // Orthonormal basis of a random subspace, P its projector.
        let basis = gaussian_matrix(&mut r, k, rank).qr().q();
        let p = &basis * basis.transpose();
        let e = nalgebra::SymmetricEigen::new(sigma.clone());
        let inv_root = &e.eigenvectors
            * Matrix::from_diagonal(&e.eigenvalues.map(|l| 1.0 / l.sqrt()))
            * e.eigenvectors.transpose();
        let a = &inv_root * p * &inv_root;
        let a = (&a + a.transpose()) * 0.5;
        let s = four_cum(&GaussianQuadraticForm::central(a, sigma).unwrap()).unwrap();
        prop_assert!((s.df - rank as f64).abs() < 1e-8, "df {} rank {rank}", s.df);
        prop_assert!((s.beta1 - 1.0).abs() < 1e-8);
        prop_assert!(s.beta2.abs() < 1e-8);
        prop_assert_eq!(s.delta, 0.0);
    }

    #[test]
    fn cumulants_are_homogeneous(seed in any::<u64>(), k in 1usize..=6, t in -3.0f64..3.0) {
        let mut r = rng(seed);
        let form = GaussianQuadraticForm::new(random_symmetric(&mut r, k), random_vector(&mut r, k, 1.0), random_spd(&mut r, k)).unwrap();
        let base = cumulants(&form).kappa;
        let scaled = cumulants(&form.scaled(t)).kappa;
        for v in 0..4 {
            let expect = base[v] * t.powi(v as i32 + 1);
            prop_assert!((scaled[v] - expect).abs() <= 1e-10 * expect.abs().max(base[1] * t * t));
        }
    }

    #[test]
    fn critical_values_invert_tails(df in 0.3f64..30.0, delta in 0.0f64..20.0, beta1 in 0.05f64..5.0, beta2 in -5.0f64..5.0, alpha in 0.001f64..0.5) {
        let kappa2 = 2.0 * (df + 2.0 * delta) / (beta1 * beta1);
        let s = FourCumSurrogate {
            beta1,
            beta2,
            df,
            delta,
            s1: 0.0,
            s2: 0.0,
            xi: None,
        };
        prop_assert!(kappa2 > 0.0);
        let d = s.critical_value(alpha).unwrap();
        prop_assert!((s.tail_prob(d) - alpha).abs() < 1e-9);
        let two = TwoCumSurrogate { beta: beta1, df0: df };
        let d2 = two.critical_value(alpha).unwrap();
        prop_assert!((two.tail_prob(d2) - alpha).abs() < 1e-9);
    }
}

// A shifted chi-square cannot follow a form dominated by one or two weights:
// for omega = (2, 1) its support starts at 0.22 where the true CDF is already
// 0.08. Random small-k forms hit this often (worst K about 0.12 here).
#[test]
#[ignore = "unattainable for forms with one or two dominant weights; run with --ignored to see the cases"]
fn four_cum_matches_monte_carlo_on_random_forms() {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for case in 0..20u64 {
        let mut r = rng(1000 + case);
        let k = 2 + (case as usize % 9);
        let p = random_simplex(&mut r, k, 0.01);
        let a = random_psd(&mut r, k, k);
        let form = GaussianQuadraticForm::central(a, multinomial_cov(&p, 0.02)).unwrap();
        let (_, w) = spectral_reduce(&form, DEFAULT_RANK_TOL).unwrap();
        let s = four_cum(&form).unwrap();
        let mc = mc_sample(&w, 100_000, case, 1).unwrap();
        let k_dist = kolmogorov_distance(|x| s.cdf(x), &mc);
        worst = worst.max(k_dist);
        if k_dist >= 0.05 {
            failures.push(format!("case {case} (k = {k}, omega = {:?}): K = {k_dist:.4}", w.omega));
        }
    }
    assert!(
        failures.is_empty(),
        "worst K {worst:.4}; {} of 20 over 0.05:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

#[test]
fn weighted_form_reproduces_direct_simulation() {
    for case in 0..4u64 {
        let mut r = rng(77 + case);
        let k = 3 + 2 * case as usize;
        let a = random_symmetric(&mut r, k);
        let mu = random_vector(&mut r, k, 0.7);
        let sigma = if case % 2 == 0 {
            random_spd(&mut r, k)
        } else {
            multinomial_cov(&random_simplex(&mut r, k, 0.02), 1.0)
        };
        let form = GaussianQuadraticForm::new(a.clone(), mu.clone(), sigma.clone()).unwrap();
        let (_, w) = spectral_reduce(&form, DEFAULT_RANK_TOL).unwrap();
        let reduced = mc_draws(&w, 100_000, case, 1);
        let direct = direct_draws(&a, &mu, &sigma, 100_000, case + 50);
        let ks = two_sample_ks(&reduced, &direct);
        assert!(ks < 0.01, "case {case}: K = {ks}");
    }
}

#[test]
fn singular_a_reduction_preserves_the_distribution() {
    // A of rank 2 in dimension 5.
    let mut r = rng(5);
    let k = 5;
    let a = random_psd(&mut r, k, 2) - random_psd(&mut r, k, 1) * 0.0;
    let mu = random_vector(&mut r, k, 0.5);
    let sigma = random_spd(&mut r, k);
    let form = GaussianQuadraticForm::new(a.clone(), mu.clone(), sigma.clone()).unwrap();
    let red = reduce_singular_a(&form, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(red.r_a, 2);
    let recon = &red.g_a * Matrix::from_diagonal(&Vector::from_vec(red.gamma_a.clone())) * red.g_a.transpose();
    assert!(max_abs(&(recon - &a)) <= 1e-8 * max_abs(&a));
    let reduced = direct_draws(red.reduced.a(), red.reduced.mu(), red.reduced.sigma(), 100_000, 1);
    let direct = direct_draws(&a, &mu, &sigma, 100_000, 2);
    assert!(two_sample_ks(&reduced, &direct) < 0.01);

    // Full rank: same eigenvalues, same law.
    let a_full = random_spd(&mut r, k);
    let full = GaussianQuadraticForm::new(a_full.clone(), mu.clone(), sigma.clone()).unwrap();
    let red = reduce_singular_a(&full, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(red.r_a, k);
    let mut expect: Vec<f64> = nalgebra::SymmetricEigen::new(a_full.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    expect.sort_by(|x, y| y.total_cmp(x));
    for (g, e) in red.gamma_a.iter().zip(&expect) {
        assert!((g - e).abs() < 1e-10 * e.abs());
    }
    let reduced = direct_draws(red.reduced.a(), red.reduced.mu(), red.reduced.sigma(), 100_000, 3);
    let original = direct_draws(&a_full, &mu, &sigma, 100_000, 4);
    assert!(two_sample_ks(&reduced, &original) < 0.01);

    let zero = GaussianQuadraticForm::central(Matrix::zeros(3, 3), Matrix::identity(3, 3)).unwrap();
    assert!(matches!(
        reduce_singular_a(&zero, DEFAULT_RANK_TOL),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn sign_split_groups_match_their_own_simulations() {
    let w = WeightedChiSquareForm::new(vec![2.0, 1.0, -0.5], vec![0.0; 3], 0.0).unwrap();
    let split = split_sign_approx(&w).unwrap();
    let pos_fit = split.pos_fit.unwrap();
    let neg_fit = split.neg_fit.unwrap();
    // Each side is the four-cumulant fit of its own group.
    let direct = four_cum_of_weights(&[2.0, 1.0]);
    assert_eq!(
        (pos_fit.beta1, pos_fit.beta2, pos_fit.df),
        (direct.beta1, direct.beta2, direct.df)
    );
    // The negative group 0.5·Y₃² is exactly a scaled χ²₁.
    assert!((neg_fit.df - 1.0).abs() < 1e-9 && (neg_fit.beta1 - 2.0).abs() < 1e-9 && neg_fit.beta2.abs() < 1e-9);
    let neg_mc = mc_sample(&w.sign_group(false), 100_000, 2, 1).unwrap();
    let chi1 = NoncentralChiSquare::central(1.0).unwrap();
    assert!(kolmogorov_distance(|x| chi1.cdf(2.0 * x), &neg_mc) < 0.02);
    let all = mc_sample(&w, 100_000, 3, 1).unwrap();
    let k_all = kolmogorov_distance_monotone(|x| split.cdf(x).unwrap(), &all);
    assert!(k_all < 0.05, "{k_all}");
}

// Same obstruction as above: the fit to 2Y₁² + Y₂² starts its support at 0.22.
#[test]
#[ignore = "K is about 0.075 for the two-weight group; run with --ignored to see it"]
fn positive_group_fit_within_two_percent() {
    let w = WeightedChiSquareForm::new(vec![2.0, 1.0, -0.5], vec![0.0; 3], 0.0).unwrap();
    let pos_fit = split_sign_approx(&w).unwrap().pos_fit.unwrap();
    let pos_mc = mc_sample(&w.sign_group(true), 100_000, 1, 1).unwrap();
    let k_pos = kolmogorov_distance(|x| pos_fit.cdf(x), &pos_mc);
    assert!(k_pos < 0.02, "K = {k_pos}");
}

fn four_cum_of_weights(omega: &[f64]) -> FourCumSurrogate {
    FourCumSurrogate::from_weighted(&WeightedChiSquareForm::central(omega.to_vec())).unwrap()
}

#[test]
fn two_cum_surrogate_on_two_weights() {
    let w = WeightedChiSquareForm::central(vec![2.0, 1.0]);
    let form = GaussianQuadraticForm::central(
        Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 1.0])),
        Matrix::identity(2, 2),
    )
    .unwrap();
    let s = two_cum(&form).unwrap();
    assert!((s.beta - 0.6).abs() < 1e-15 && (s.df0 - 1.8).abs() < 1e-15);
    let mc = mc_sample(&w, 100_000, 4, 1).unwrap();
    // Two moments only: close but visibly imperfect.
    let k = kolmogorov_distance(|x| s.cdf(x), &mc);
    assert!(k < 0.05, "{k}");
}
