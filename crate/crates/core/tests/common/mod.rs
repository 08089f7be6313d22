#![allow(dead_code)]

use quadstat_core::distributions::normal_cdf;
use quadstat_core::linalg::{Matrix, Vector};
use quadstat_core::rng::{stream, StreamRng};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

pub fn rng(seed: u64) -> StreamRng {
    stream(seed, 0xfeed)
}

pub fn gaussian_matrix(rng: &mut StreamRng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// `GGᵀ/rank` with `G` a `k × rank` Gaussian matrix.
pub fn random_psd(rng: &mut StreamRng, k: usize, rank: usize) -> Matrix {
    let g = gaussian_matrix(rng, k, rank);
    let a = &g * g.transpose() / rank as f64;
    (&a + a.transpose()) * 0.5
}

/// Well-conditioned symmetric positive definite matrix.
pub fn random_spd(rng: &mut StreamRng, k: usize) -> Matrix {
    random_psd(rng, k, k + 2) + Matrix::identity(k, k) * 0.2
}

pub fn random_symmetric(rng: &mut StreamRng, k: usize) -> Matrix {
    let g = gaussian_matrix(rng, k, k);
    (&g + g.transpose()) * 0.5
}

pub fn random_vector(rng: &mut StreamRng, k: usize, scale: f64) -> Vector {
    Vector::from_fn(k, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

/// Flat-Dirichlet probability vector with every entry at least `floor`.
pub fn random_simplex(rng: &mut StreamRng, k: usize, floor: f64) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = e.iter().sum();
    let free = 1.0 - floor * k as f64;
    e.iter().map(|x| floor + free * x / total).collect()
}

/// `(diag(p) − ppᵀ)·scale`.
pub fn multinomial_cov(p: &[f64], scale: f64) -> Matrix {
    let k = p.len();
    Matrix::from_fn(k, k, |i, j| scale * (if i == j { p[i] } else { 0.0 } - p[i] * p[j]))
}

pub fn random_haplotypes(rng: &mut StreamRng, k: usize, loci: usize) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    while out.len() < k {
        let h: String = (0..loci)
            .map(|_| if rng.random::<bool>() { '1' } else { '0' })
            .collect();
        if !out.contains(&h) {
            out.push(h);
        }
    }
    out
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut best = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / na - j as f64 / nb).abs());
    }
    best
}

/// Direct draws of `XᵀAX` with `X = μ + LZ`, `LLᵀ = Σ`.
pub fn direct_draws(a: &Matrix, mu: &Vector, sigma: &Matrix, n: usize, seed: u64) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(sigma.clone());
    let k = mu.len();
    let root = Matrix::from_fn(k, k, |r, c| {
        eig.eigenvectors[(r, c)] * eig.eigenvalues[c].max(0.0).sqrt()
    });
    let mut rng = stream(seed, 0xd1ec7);
    (0..n)
        .map(|_| {
            let z = random_vector(&mut rng, k, 1.0);
            let x = mu + &root * z;
            x.dot(&(a * &x))
        })
        .collect()
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton's method on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫(F₁ − F₂)² f₁ dx` for `F₁ = N(mu, sd²)`, piecewise over the steps of `F₂`.
pub fn cm_squared_oracle(mu: f64, sd: f64, sample: &[f64]) -> f64 {
    let rule = gauss_legendre(20);
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let lo = xs[0].min(mu - 12.0 * sd);
    let hi = xs[xs.len() - 1].max(mu + 12.0 * sd);
    let mut knots = vec![lo];
    knots.extend(xs.iter().copied());
    knots.push(hi);
    knots.dedup();
    let f1 = |x: f64| normal_cdf((x - mu) / sd);
    let dens = |x: f64| (-0.5 * ((x - mu) / sd).powi(2)).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt());
    let mut total = 0.0;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let step = xs.partition_point(|&v| v <= a) as f64 / n;
        let pieces = ((b - a) / (0.25 * sd)).ceil().max(1.0) as usize;
        let h = (b - a) / pieces as f64;
        for p in 0..pieces {
            let (pa, pb) = (a + p as f64 * h, a + (p + 1) as f64 * h);
            let (c, r) = (0.5 * (pa + pb), 0.5 * (pb - pa));
            for &(t, wt) in &rule {
                let x = c + r * t;
                total += wt * r * (f1(x) - step).powi(2) * dens(x);
            }
        }
    }
    total
}
