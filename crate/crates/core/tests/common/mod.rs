//! Shared fixtures and brute-force oracles for the integration tests.
//!
//! Nothing here calls into the lattice, expansion or metric code paths; the
//! oracles recompute marginals, entropies and integrals directly.

#![allow(dead_code)]

use infolattice::{JointDistribution, Schema};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn binary(n: usize) -> Schema {
    Schema::anonymous(&vec![2; n]).unwrap()
}

pub fn xor() -> JointDistribution {
    let mut p = vec![0.0; 8];
    for idx in [0b000, 0b011, 0b101, 0b110] {
        p[idx] = 0.25;
    }
    JointDistribution::new(binary(3), p).unwrap()
}

/// Three copies of one fair coin.
pub fn copy3() -> JointDistribution {
    let mut p = vec![0.0; 8];
    p[0b000] = 0.5;
    p[0b111] = 0.5;
    JointDistribution::new(binary(3), p).unwrap()
}

/// Random schema with `n` variables of cardinality 2 or 3.
pub fn random_schema(rng: &mut impl Rng, n: usize) -> Schema {
    let cards: Vec<usize> = (0..n).map(|_| rng.random_range(2..=3)).collect();
    Schema::anonymous(&cards).unwrap()
}

/// Strictly positive random table (normalized exponential draws).
pub fn random_positive(rng: &mut impl Rng, schema: &Schema) -> JointDistribution {
    let w: Vec<f64> = (0..schema.state_count())
        .map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-3)
        .collect();
    let z: f64 = w.iter().sum();
    JointDistribution::new(schema.clone(), w.into_iter().map(|x| x / z).collect()).unwrap()
}

/// Random table where roughly a fifth of the states have zero mass.
pub fn random_sparse(rng: &mut impl Rng, schema: &Schema) -> JointDistribution {
    loop {
        let w: Vec<f64> = (0..schema.state_count())
            .map(|_| {
                if rng.random::<f64>() < 0.2 {
                    0.0
                } else {
                    -(1.0 - rng.random::<f64>()).ln()
                }
            })
            .collect();
        let z: f64 = w.iter().sum();
        if z > 0.0 {
            return JointDistribution::new(schema.clone(), w.into_iter().map(|x| x / z).collect())
                .unwrap();
        }
    }
}

pub fn mix(a: &JointDistribution, b: &JointDistribution, t: f64) -> JointDistribution {
    let p = a
        .probs()
        .iter()
        .zip(b.probs())
        .map(|(x, y)| (1.0 - t) * x + t * y)
        .collect();
    JointDistribution::new(a.schema().clone(), p).unwrap()
}

// ---- brute-force lattice oracle -------------------------------------------

/// Marginal over the variables whose bits are set in `mask`, by decoding
/// every state tuple.
pub fn oracle_marginal(d: &JointDistribution, mask: u32) -> Vec<f64> {
    let cards: Vec<usize> = d.schema().cardinalities().collect();
    let kept: Vec<usize> = (0..cards.len()).filter(|i| mask & (1 << i) != 0).collect();
    let size: usize = kept.iter().map(|&i| cards[i]).product();
    let mut out = vec![0.0; size.max(1)];
    for (idx, &p) in d.probs().iter().enumerate() {
        let mut rem = idx;
        let mut digits = vec![0; cards.len()];
        for i in (0..cards.len()).rev() {
            digits[i] = rem % cards[i];
            rem /= cards[i];
        }
        let mut j = 0;
        for &i in &kept {
            j = j * cards[i] + digits[i];
        }
        out[j] += p;
    }
    out
}

pub fn oracle_entropy(d: &JointDistribution, mask: u32) -> f64 {
    if mask == 0 {
        return 0.0;
    }
    oracle_marginal(d, mask)
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Interaction information by explicit inclusion–exclusion over submasks.
pub fn oracle_interaction(d: &JointDistribution, mask: u32) -> f64 {
    let mut acc = 0.0;
    for sub in 1..=mask {
        if sub & !mask != 0 {
            continue;
        }
        let sign = if sub.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * oracle_entropy(d, sub);
    }
    acc
}

pub fn oracle_mi(d: &JointDistribution, i: usize, j: usize) -> f64 {
    oracle_entropy(d, 1 << i) + oracle_entropy(d, 1 << j) - oracle_entropy(d, (1 << i) | (1 << j))
}

pub fn oracle_kl(p: &JointDistribution, q: &JointDistribution) -> f64 {
    p.probs()
        .iter()
        .zip(q.probs())
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| a * (a / b).log2())
        .sum()
}

/// Mixes two random distributions with interactions of opposite sign and
/// bisects the mixing weight until `|I(full)| < tol`.
pub fn tuned_zero_interaction(rng: &mut impl Rng, schema: &Schema, tol: f64) -> JointDistribution {
    let full = (1u32 << schema.len()) - 1;
    let (mut neg, mut pos) = (None, None);
    while neg.is_none() || pos.is_none() {
        let d = random_positive(rng, schema);
        let i = oracle_interaction(&d, full);
        if i < 0.0 && neg.is_none() {
            neg = Some(d);
        } else if i > 0.0 && pos.is_none() {
            pos = Some(d);
        }
    }
    let (a, b) = (neg.unwrap(), pos.unwrap());
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d = mix(&a, &b, mid);
        let i = oracle_interaction(&d, full);
        if i.abs() < tol {
            return d;
        }
        if i < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    panic!("bisection did not reach |I| < {tol}");
}

// ---- continuous oracles ---------------------------------------------------

/// Adaptive Gauss–Kronrod (7/15) quadrature to absolute tolerance `tol`.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    const XK: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_4,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_5,
        0.0,
    ];
    const WK: [f64; 8] = [
        0.022_935_322_010_529_22,
        0.063_092_092_629_978_55,
        0.104_790_010_322_250_2,
        0.140_653_259_715_525_9,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_4,
        0.204_432_940_075_298_9,
        0.209_482_141_084_727_8,
    ];
    const WG: [f64; 4] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_7,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
    ];
    fn gk(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut kron = WK[7] * f(c);
        let mut gauss = WG[3] * f(c);
        for k in 0..7 {
            let dx = h * XK[k];
            let s = f(c - dx) + f(c + dx);
            kron += WK[k] * s;
            if k % 2 == 1 {
                gauss += WG[k / 2] * s;
            }
        }
        (kron * h, (kron - gauss).abs() * h)
    }
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol / 2.0, depth - 1) + rec(f, m, b, tol / 2.0, depth - 1)
    }
    rec(f, a, b, tol, 40)
}

pub fn normal_ln_pdf(mu: f64, sigma: f64, x: f64) -> f64 {
    let z = (x - mu) / sigma;
    -0.5 * z * z - sigma.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
}

/// `∫ N(x; μ, σ) [ln R(x) − ln S(x)] dx` on `μ ± 12σ`.
pub fn gaussian_integral(reference: (f64, f64), r: (f64, f64), s: (f64, f64)) -> f64 {
    let (mu, sigma) = reference;
    let f = |x: f64| {
        normal_ln_pdf(mu, sigma, x).exp()
            * (normal_ln_pdf(r.0, r.1, x) - normal_ln_pdf(s.0, s.1, x))
    };
    integrate(&f, mu - 12.0 * sigma, mu + 12.0 * sigma, 1e-10)
}

/// `Σ_k Pois(k; λ) ln(Pois(k; l1) / Pois(k; l2))`, summed until the
/// remaining reference mass is below 1e-14.
pub fn poisson_series(lambda: f64, l1: f64, l2: f64) -> f64 {
    let mut acc = 0.0;
    let mut mass = 0.0;
    let mut k: u64 = 0;
    let mut ln_fact = 0.0;
    loop {
        if k > 0 {
            ln_fact += (k as f64).ln();
        }
        let kf = k as f64;
        let ln_p = -lambda + kf * lambda.ln() - ln_fact;
        let p = ln_p.exp();
        let ln_r = -l1 + kf * l1.ln() - ln_fact;
        let ln_s = -l2 + kf * l2.ln() - ln_fact;
        acc += p * (ln_r - ln_s);
        mass += p;
        k += 1;
        if kf > lambda && 1.0 - mass < 1e-14 {
            break;
        }
        if k > 100_000 {
            break;
        }
    }
    acc
}

// ---- spanning trees -------------------------------------------------------

/// Largest total weight over all spanning trees of the complete graph on `n`
/// nodes, by enumerating every `(n−1)`-edge subset.
pub fn best_spanning_tree_weight(n: usize, weight: &impl Fn(usize, usize) -> f64) -> f64 {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut best = f64::NEG_INFINITY;
    let m = pairs.len();
    let k = n - 1;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut comp: Vec<usize> = (0..n).collect();
        fn root(c: &mut [usize], mut x: usize) -> usize {
            while c[x] != x {
                x = c[x];
            }
            x
        }
        let mut acyclic = true;
        let mut total = 0.0;
        for &e in &idx {
            let (a, b) = pairs[e];
            let (ra, rb) = (root(&mut comp, a), root(&mut comp, b));
            if ra == rb {
                acyclic = false;
                break;
            }
            comp[ra] = rb;
            total += weight(a, b);
        }
        if acyclic && total > best {
            best = total;
        }
        // Advance to the next k-combination of 0..m.
        let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
            return best;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
