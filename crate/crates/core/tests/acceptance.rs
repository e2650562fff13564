//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exact criteria compare against moments and pmfs computed here from their
//! closed forms; Monte Carlo criteria use fixed seeds. The process fails
//! when a criterion outside `KNOWN_FAILURES` fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simplex_kernels::copula::{estimate_canonical_correlation, sample_pairs, CopulaSpec, Estimator};
use simplex_kernels::dist::{sample_pd, DirichletParams, RngStream, SimplexPoint};
use simplex_kernels::hahn::{gasper_product, h_kernel, h_kernel_chi, h_kernels, u_norm, univariate_hahn, xi_h, HahnContext};
use simplex_kernels::intrep::{verify_kernel_representation, verify_z_moments, KoornwinderSampler};
use simplex_kernels::jacobi::{coeff_a, coeff_c, q_kernel, q_kernel_poly, xi, xi_poly};
use simplex_kernels::numkit::mc::sharded;
use simplex_kernels::numkit::stats::Welford;
use simplex_kernels::numkit::scalar::rational_to_f64;
use simplex_kernels::numkit::{compositions, MultiIndex, Poly, Rational};
use simplex_kernels::pds::{
    bernstein_approx, counterexample_check, dirac_pmf, jpds_to_hpds, jpds_to_pmf, mixture_density, pmf_to_jpds, scan_hpds, wf_sequence,
    DegreeSequence, Verdict,
};

/// Criteria that cannot pass as stated, with the reason.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    8,
    "Var[sum w^2] under PD(1) is exactly 1/24 (E[(sum w^2)^2] = 1/4 + 1/24 = 7/24); the 1/12 target is unreachable",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// ---------- exact oracles ----------

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn rise(a: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * (a + Rational::from_integer(i.into())))
}

fn fall(a: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * (a - Rational::from_integer(i.into())))
}

fn int(v: u32) -> Rational {
    Rational::from_integer(v.into())
}

fn fact(n: u32) -> Rational {
    fall(&int(n), n)
}

/// `E[prod X_i^k_i]` for `X ~ Dirichlet(a)`.
fn moment(a: &[Rational], k: &[u32]) -> Rational {
    let total = a.iter().fold(Rational::zero(), |s, v| s + v);
    let num = a.iter().zip(k).fold(Rational::one(), |acc, (ai, &ki)| acc * rise(ai, ki));
    num / rise(&total, k.iter().sum())
}

/// Expectation of a polynomial whose variables split into independent
/// Dirichlet blocks.
fn expect(p: &Poly<Rational>, blocks: &[&[Rational]]) -> Rational {
    let mut s = Rational::zero();
    for (e, c) in p.terms() {
        let mut off = 0;
        let mut t = c.clone();
        for b in blocks {
            t *= moment(b, &e[off..off + b.len()]);
            off += b.len();
        }
        s += t;
    }
    s
}

/// Dirichlet-multinomial pmf.
fn dm(a: &[Rational], r: &[u32]) -> Rational {
    let size: u32 = r.iter().sum();
    let coef = r.iter().fold(fact(size), |acc, &k| acc / fact(k));
    coef * moment(a, r)
}

fn params(a: &[(i64, i64)]) -> DirichletParams<Rational> {
    DirichletParams::new(a.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
}

fn alpha_set() -> Vec<DirichletParams<Rational>> {
    vec![params(&[(1, 1), (1, 1)]), params(&[(1, 1), (2, 1)]), params(&[(1, 1), (1, 1), (2, 1)]), params(&[(1, 2), (3, 2), (1, 1)])]
}

fn random_point(d: usize, rng: &mut ChaCha8Rng) -> SimplexPoint<Rational> {
    let w: Vec<i64> = (0..d).map(|_| rng.random_range(1..=12)).collect();
    let t: i64 = w.iter().sum();
    SimplexPoint::new(w.iter().map(|&k| q(k, t)).collect()).unwrap()
}

/// Fixes the first `d` of `2d` variables at `x`.
fn at_x(p: &Poly<Rational>, x: &SimplexPoint<Rational>) -> Poly<Rational> {
    let d = x.dim();
    let subs: Vec<Poly<Rational>> = (0..2 * d)
        .map(|i| if i < d { Poly::constant(d, x.coords()[i].clone()) } else { Poly::var(d, i - d) })
        .collect();
    p.compose(&subs)
}

/// `R_n^{a,b}(x) = 2F1(-n, n+a+b-1; b; 1-x)` as a polynomial in `1-x`.
fn jacobi_r(a: &Rational, b: &Rational, n: u32) -> Vec<Rational> {
    let top = int(n) + a + b - Rational::one();
    (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
            sign * fall(&int(n), k) * rise(&top, k) / (rise(b, k) * fact(k))
        })
        .collect()
}

// ---------- criteria ----------

fn c1_orthogonality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0;
    for alpha in alpha_set() {
        let d = alpha.dim();
        let polys: Vec<_> = (0..=4).map(|n| q_kernel_poly(&alpha, n).unwrap()).collect();
        for _ in 0..5 {
            let (x, z) = (random_point(d, &mut rng), random_point(d, &mut rng));
            let px: Vec<_> = polys.iter().map(|p| at_x(p, &x)).collect();
            let pz: Vec<_> = polys.iter().map(|p| at_x(p, &z)).collect();
            for n in 0..=4u32 {
                for m in 0..=4u32 {
                    let lhs = expect(&px[n as usize].mul(&pz[m as usize]), &[alpha.alpha()]);
                    let rhs = if n == m { q_kernel(&alpha, n, &x, &z).unwrap() } else { Rational::zero() };
                    if lhs != rhs {
                        return outcome(false, format!("alpha={:?} n={n} m={m}: {lhs} != {rhs}", alpha.alpha()));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(true, format!("{checked} exact identities"))
}

fn c2_triangles() -> Outcome {
    let start = Instant::now();
    let thetas = [q(1, 2), q(1, 1), q(2, 1), q(7, 3), q(10, 1)];
    let top = 12u32;
    for theta in &thetas {
        for m in 0..=top {
            for n in 0..=m {
                // c_mn = m_[n] / (theta+m)_(n)
                let want = fall(&int(m), n) / rise(&(theta + int(m)), n);
                if coeff_c(theta, m, n).unwrap() != want {
                    return outcome(false, format!("c_{m}{n} at theta={theta}"));
                }
            }
        }
        for n in 0..=top {
            for k in 0..=n {
                let s = (k..=n).fold(Rational::zero(), |s, m| s + coeff_a(theta, n, m).unwrap() * coeff_c(theta, m, k).unwrap());
                let want = if n == k { Rational::one() } else { Rational::zero() };
                if s != want {
                    return outcome(false, format!("(AC)_{n}{k} = {s} at theta={theta}"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(secs < 1.0, format!("A C = I through degree {top} for {} values of theta in {secs:.3}s", thetas.len()))
}

fn c3_maineq() -> Outcome {
    let mut checked = 0;
    for alpha in [params(&[(1, 1), (1, 1)]), params(&[(1, 1), (2, 1)]), params(&[(1, 2), (3, 2)])] {
        let (a, b) = (&alpha.alpha()[0], &alpha.alpha()[1]);
        let theta = alpha.total().clone();
        // R_n(X_1) in the variables (X_1, X_2, Y_1, Y_2): 1 - X_1 = X_2 on the simplex
        let r_poly = |n: u32, var: usize| {
            let mut p = Poly::zero(4);
            for (k, c) in jacobi_r(a, b, n).into_iter().enumerate() {
                let mut e = vec![0; 4];
                e[var] = k as u32;
                p.add_term(e, c);
            }
            p
        };
        let blocks: [&[Rational]; 2] = [alpha.alpha(), alpha.alpha()];
        for n in 0..=4u32 {
            let rx = r_poly(n, 1);
            // zeta_n = 1 / E[R_n(X_1)^2], from the moments alone
            let zeta = expect(&rx.mul(&rx), &blocks).recip();
            for k in 0..=4u32 {
                let ry = r_poly(k, 3);
                for m in 0..=4u32 {
                    let e = expect(&xi_poly(&alpha, m).mul(&rx).mul(&ry), &blocks);
                    let (lhs, rhs) = if n == k {
                        (e * &zeta, fall(&int(m), n) / rise(&(theta.clone() + int(m)), n))
                    } else {
                        (e, Rational::zero())
                    };
                    if lhs != rhs {
                        return outcome(false, format!("alpha={:?} m={m} n={n} k={k}: {lhs} != {rhs}", alpha.alpha()));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(true, format!("{checked} exact moments, m <= 4"))
}

fn c4_hahn() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for alpha in alpha_set() {
        let d = alpha.dim();
        for size in 1..=4u32 {
            let ctx = HahnContext::new(alpha.clone(), size);
            let comps: Vec<MultiIndex> = compositions(d, size).collect();
            let w: Vec<Rational> = comps.iter().map(|r| dm(alpha.alpha(), r.parts())).collect();
            let table: Vec<Vec<Vec<Rational>>> =
                comps.iter().map(|s| comps.iter().map(|r| h_kernels(&ctx, size, s, r).unwrap()).collect()).collect();
            // exhaustive reproducing property under DM(alpha, N)
            for n in 0..=size as usize {
                for m in 0..=size as usize {
                    for i in 0..comps.len() {
                        for j in 0..comps.len() {
                            let lhs = (0..comps.len()).fold(Rational::zero(), |s, k| s + &w[k] * &table[i][k][n] * &table[k][j][m]);
                            let rhs = if n == m { table[i][j][n].clone() } else { Rational::zero() };
                            if lhs != rhs {
                                return outcome(false, format!("DM orthogonality alpha={:?} N={size} n={n} m={m}", alpha.alpha()));
                            }
                            checked += 1;
                        }
                    }
                }
            }
            // H_n(r, s) = (|alpha|+N)_(n) / N_[n] E[Q_n(X, Y)], X ~ D(alpha+r), Y ~ D(alpha+s);
            // xi^H_m(r, s) = E[xi_m(X, Y)] likewise
            for n in 0..=size {
                let kp = q_kernel_poly(&alpha, n).unwrap();
                let xp = xi_poly(&alpha, n);
                let pre = rise(&(alpha.total() + int(size)), n) / fall(&int(size), n);
                for r in &comps {
                    for s in &comps {
                        let (ar, as_) = (alpha.shifted(r), alpha.shifted(s));
                        let blocks: [&[Rational]; 2] = [ar.alpha(), as_.alpha()];
                        if h_kernel(&ctx, n, r, s).unwrap() != pre.clone() * expect(&kp, &blocks)
                            || xi_h(&ctx, n, r, s).unwrap() != expect(&xp, &blocks)
                        {
                            return outcome(false, format!("posterior mixture alpha={:?} N={size} n={n}", alpha.alpha()));
                        }
                        checked += 2;
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(secs < 120.0, format!("{checked} exact identities in {secs:.1}s"))
}

fn c5_gasper() -> Outcome {
    let mut checked = 0;
    for alpha in alpha_set() {
        for size in 1..=5u32 {
            let ctx = HahnContext::new(alpha.clone(), size);
            let comps: Vec<MultiIndex> = compositions(alpha.dim(), size).collect();
            for n in 0..=size {
                for r in &comps {
                    for s in &comps {
                        let xi_form = h_kernel(&ctx, n, r, s).unwrap();
                        if h_kernel_chi(&ctx, n, r, s).unwrap() != xi_form {
                            return outcome(false, format!("chi form alpha={:?} N={size} n={n}", alpha.alpha()));
                        }
                        checked += 1;
                        if alpha.dim() == 2 {
                            let (a, b) = (&alpha.alpha()[0], &alpha.alpha()[1]);
                            let (r0, s0) = (r.parts()[0], s.parts()[0]);
                            let g = gasper_product(a, b, n, r0, s0, size).unwrap();
                            let direct = univariate_hahn(a, b, n, r0, size).unwrap() * univariate_hahn(a, b, n, s0, size).unwrap();
                            if g != direct || u_norm(a, b, size, n).unwrap() * g != xi_form {
                                return outcome(false, format!("product formula alpha={:?} N={size} n={n}", alpha.alpha()));
                            }
                            checked += 2;
                        }
                    }
                }
            }
        }
    }
    outcome(true, format!("{checked} exact identities, N <= 5"))
}

fn c6_zchain() -> Outcome {
    let start = Instant::now();
    let exact_alpha = params(&[(2, 1), (2, 1), (1, 1)]);
    let alpha = exact_alpha.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut total, mut failed, mut worst) = (0, 0, 0.0f64);
    for pair in 0..5u64 {
        let (x, y) = (random_point(3, &mut rng), random_point(3, &mut rng));
        let (xf, yf) = (x.to_f64(), y.to_f64());
        let draws = 1_000_000;
        let kernels = verify_kernel_representation(&alpha, &xf, &yf, 4, draws, 6000 + pair).unwrap();
        let moments = verify_z_moments(&alpha, &xf, &yf, 3, draws, 7000 + pair).unwrap();
        let mut score = |est: f64, se: f64, exact: f64| {
            let z = if se > 0.0 { (est - exact) / se } else if (est - exact).abs() < 1e-12 { 0.0 } else { f64::INFINITY };
            total += 1;
            worst = worst.max(z.abs());
            if z.abs() > 3.0 {
                failed += 1;
            }
        };
        for c in &kernels {
            let exact = q_kernel(&exact_alpha, c.degree, &x, &y).unwrap();
            score(c.estimate.mean, c.estimate.se, rational_to_f64(&exact));
        }
        // E[Z^m] = (alpha_3)_(m) / (|alpha|)_(m) xi_m(x, y), alpha_3 the smallest
        for c in &moments {
            let m = c.degree;
            let exact = rise(&q(1, 1), m) / rise(&q(5, 1), m) * xi(&exact_alpha, m, &x, &y).unwrap();
            score(c.estimate.mean, c.estimate.se, rational_to_f64(&exact));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(failed <= 1 && secs < 600.0, format!("{failed}/{total} checks beyond |z| = 3, max |z| = {worst:.2}, {secs:.1}s"))
}

fn c7_koornwinder() -> Outcome {
    let (a, b) = (q(1, 1), q(2, 1));
    let coeffs: Vec<Vec<f64>> = (0..=6).map(|n| jacobi_r(&a, &b, n).iter().map(rational_to_f64).collect()).collect();
    let r = |n: usize, x: f64| coeffs[n].iter().rev().fold(0.0, |acc, c| acc * (1.0 - x) + c);
    let sampler = KoornwinderSampler::new(1.0, 2.0).unwrap();
    let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
    let (mut worst, mut bad) = (0.0f64, Vec::new());
    for (i, &x) in grid.iter().enumerate() {
        for (j, &y) in grid.iter().enumerate() {
            let acc = sharded(100_000, 700 + (5 * i + j) as u64, 7, |rng, buf| {
                let z = sampler.sample(x, y, rng);
                for (n, v) in buf.iter_mut().enumerate() {
                    *v = r(n, z);
                }
            });
            for n in 1..=6 {
                let z = acc[n].estimate().z_score(r(n, x) * r(n, y));
                worst = worst.max(z.abs());
                if z.abs() > 3.0 {
                    bad.push(format!("(x={x}, y={y}, n={n}, z={z:.2})"));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("25 cells x 6 degrees, max |z| = {worst:.2}{}", bad.iter().map(|b| format!(" {b}")).collect::<String>()))
}

fn c8_pd_moments() -> Outcome {
    let mut rng = RngStream::new(808);
    let mut w = Welford::new();
    for _ in 0..100_000 {
        w.push(sample_pd(1.0, 200, &mut rng).unwrap().homozygosity());
    }
    // E[sum w^a] = theta B(a, theta); E[sum_{i != j} w_i^2 w_j^2] = theta^2 Gamma(theta) / Gamma(theta+4)
    let theta = q(1, 1);
    let mean = theta.clone() * fact(1) / rise(&theta, 2);
    let second = theta.clone() * fact(3) / rise(&theta, 4) + theta.clone() * theta.clone() / rise(&theta, 4);
    let var = second - mean.clone() * &mean;
    let (m, v) = (w.mean(), w.variance());
    let pass = (m - 0.5).abs() <= 0.01 && (v - 1.0 / 12.0).abs() <= 0.005;
    outcome(pass, format!("mean {m:.4} (target 0.5, exact {mean}), variance {v:.4} (target 1/12 = 0.0833, exact {var} = {:.4})", 1.0 / 24.0))
}

fn c9_pds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut trips = 0;
    for theta in [q(2, 1), q(1, 2), q(3, 1)] {
        let mut pmfs: Vec<DegreeSequence<Rational>> = (0..=8).map(dirac_pmf).collect();
        for _ in 0..5 {
            let len = rng.random_range(1..=9usize);
            let w: Vec<i64> = (0..len).map(|_| rng.random_range(0..=6)).collect();
            let t: i64 = w.iter().sum::<i64>().max(1);
            let mut v: Vec<Rational> = w.iter().map(|&k| q(k, t)).collect();
            if w.iter().all(|&k| k == 0) {
                v[0] = Rational::one();
            }
            pmfs.push(DegreeSequence::new(v, "random"));
        }
        for pmf in &pmfs {
            let rho = pmf_to_jpds(&theta, pmf, 8).unwrap();
            // rho_n = sum_m d_m m_[n] / (theta+m)_(n)
            for n in 0..=8u32 {
                let want = (0..=pmf.max_degree()).fold(Rational::zero(), |s, m| s + pmf.get(m) * fall(&int(m), n) / rise(&(theta.clone() + int(m)), n));
                if rho.get(n) != want {
                    return outcome(false, format!("pmf -> rho at n={n}, theta={theta}"));
                }
            }
            let back = jpds_to_pmf(&theta, &rho).unwrap();
            if (0..=8).any(|m| back.pmf.get(m) != pmf.get(m)) || !back.is_pmf() {
                return outcome(false, format!("round trip {:?} at theta={theta}", pmf.values()));
            }
            trips += 1;
        }
    }
    let alpha = params(&[(1, 1), (1, 1)]);
    let theta = alpha.total().clone();
    let wf = wf_sequence(2.0, 1.0, 4).unwrap();
    let wf = DegreeSequence::new(wf.values().iter().map(|&v| Rational::from_float(v).unwrap()).collect(), "wf");
    let verdict = scan_hpds(&alpha, 4, &jpds_to_hpds(&theta, 4, &wf)).unwrap().verdict();
    if verdict != Verdict::CertifiedPositive {
        return outcome(false, format!("WF image at N=4: {verdict}"));
    }
    // the same rho serves Dirichlet marginals of any dimension with total theta
    let pmf = DegreeSequence::new(vec![q(1, 5), q(0, 1), q(1, 2), q(1, 10), q(1, 5)], "mix");
    let rho = pmf_to_jpds(&theta, &pmf, 4).unwrap();
    let mut dims = 0;
    for a in [params(&[(1, 1), (1, 1)]), params(&[(1, 2), (1, 1), (1, 2)]), params(&[(2, 3), (2, 3), (2, 3)])] {
        for _ in 0..5 {
            let (x, y) = (random_point(a.dim(), &mut rng), random_point(a.dim(), &mut rng));
            let series = (0..=4).fold(Rational::zero(), |s, n| s + rho.get(n) * q_kernel(&a, n, &x, &y).unwrap());
            if mixture_density(&a, &pmf, &x, &y).unwrap() != series {
                return outcome(false, format!("mixture != kernel series for alpha={:?}", a.alpha()));
            }
            dims += 1;
        }
    }
    outcome(true, format!("{trips} exact round trips; WF image at N=4 {verdict}; {dims} mixture identities in d = 2, 3"))
}

fn c10_counterexample() -> Outcome {
    let rep = counterexample_check(5.0, 2.0, 4).unwrap();
    let Some((order, s, value)) = rep.violation else {
        return outcome(false, "no violation reported");
    };
    // q'(s) = -lambda E[W exp(-lambda W s)] < 0 for W ~ Beta(1, 1)
    let analytic = {
        let l = 5.0 * s;
        -5.0 * ((1.0 - (-l).exp() * (1.0 + l)) / (l * l))
    };
    let pass = order <= 4 && rep.quadrature_error <= 1e-10 && rep.step == 1e-3 && value < 0.0;
    outcome(
        pass,
        format!(
            "violation at order {order}, s = {s}, value {value:.6} (closed form {analytic:.6}); quadrature change {:.1e} with {} nodes",
            rep.quadrature_error, rep.nodes
        ),
    )
}

fn c11_bernstein() -> Outcome {
    let alpha = params(&[(1, 1), (1, 1)]);
    let rho = wf_sequence(2.0, 1.0, 30).unwrap();
    let mut detail = Vec::new();
    let mut pass = true;
    for size in [16u32, 64] {
        let approx = bernstein_approx(&alpha, &rho, size, 30).unwrap();
        let verdict = scan_hpds(&alpha, size, &approx).unwrap().verdict();
        pass &= verdict == Verdict::CertifiedPositive;
        let errs: Vec<f64> = (0..=3u32)
            .map(|n| (rational_to_f64(&approx.get(n)) - (-((n * (n + 1)) as f64) / 2.0).exp()).abs())
            .collect();
        if size == 64 {
            pass &= errs.iter().all(|&e| e <= 5e-2);
        }
        detail.push(format!("N={size}: {verdict}, max error n<=3 {:.2e}", errs.iter().cloned().fold(0.0, f64::max)));
    }
    outcome(pass, detail.join("; "))
}

fn c12_copula() -> Outcome {
    let alpha = DirichletParams::new(vec![1.0, 1.0]).unwrap();
    let mut detail = Vec::new();
    let mut pass = true;
    for (m, target) in [(2u32, 0.5), (0, 0.0)] {
        let pairs = sample_pairs(&CopulaSpec::dirac(alpha.clone(), m), 100_000, 1200 + m as u64);
        let est = estimate_canonical_correlation(&pairs, &alpha, 1, Estimator::Kernel).unwrap();
        let z = est.z_score(target);
        pass &= z.abs() <= 3.0;
        detail.push(format!("delta_{m}: rho_1 = {:.4} +- {:.4} (target {target}, z = {z:.2})", est.mean, est.se));
    }
    outcome(pass, detail.join("; "))
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "exact kernel orthogonality", c1_orthogonality),
        (2, "triangle inversion", c2_triangles),
        (3, "xi moment identity", c3_maineq),
        (4, "Hahn exactness", c4_hahn),
        (5, "Gasper product formula", c5_gasper),
        (6, "Z-chain representation", c6_zchain),
        (7, "Koornwinder sampler", c7_koornwinder),
        (8, "Poisson-Dirichlet moments", c8_pd_moments),
        (9, "PDS round trip and positivity", c9_pds),
        (10, "pgf counterexample", c10_counterexample),
        (11, "Bernstein approximation", c11_bernstein),
        (12, "copula spectral test", c12_copula),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id:>2} {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), out.detail);
        if out.pass {
            passed += 1;
        } else if let Some((_, why)) = KNOWN_FAILURES.iter().find(|(k, _)| *k == id) {
            println!("       known failure: {why}");
        } else {
            unexpected.push(id);
        }
    }
    println!("{passed}/12 criteria passed");
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
