//! The sl2 Verlinde CohFT: Chern characters of conformal-block bundles.
//!
//! Weights are `0..=ℓ`, the pairing is `δ_{ab}` (every sl2 weight is
//! self-dual) and the unit is the trivial weight. The R-matrix is diagonal,
//! `exp(t z (c/24 - w(a)))` in the Givental–Teleman convention, and
//! coefficients live in `Q[t]/(t^{K+1})`.
//!
//! The engine's leg contribution is `R(ψ)`, the inverse of that convention,
//! so [`verlinde_theory`] reconstructs with [`verlinde_action_rmatrix`],
//! `exp(-t z (c/24 - w(a)))`. With the printed matrix the correlators would
//! be `ch_{-t}`; the M̄_{0,4} degree test pins the sign.

use crate::arith::{Matrix, Rational, TruncSeries, Var};
use crate::cohft::{FrobeniusData, RMatrix};
use crate::error::{Error, Result};
use crate::graphs::{even_subset, stable_graphs};
use crate::reconstruction::{AxiomCheck, Engine, Insertion, Theory};

/// Coefficient ring of the Verlinde theory.
pub type TPoly = TruncSeries<Rational>;

fn check_level(level: u32) -> Result<()> {
    if level == 0 {
        return Err(Error::Range("level must be at least 1".into()));
    }
    Ok(())
}

fn check_weights(level: u32, weights: &[u32]) -> Result<()> {
    check_level(level)?;
    match weights.iter().find(|&&a| a > level) {
        Some(a) => Err(Error::Range(format!("weight {a} outside 0..={level}"))),
        None => Ok(()),
    }
}

/// Level-`ℓ` fusion rule: 1 iff `|a-b| <= c <= min(a+b, 2ℓ-a-b)` and
/// `a+b+c` is even.
pub fn sl2_fusion(level: u32, a: u32, b: u32, c: u32) -> Result<u32> {
    check_weights(level, &[a, b, c])?;
    let ok = a.abs_diff(b) <= c && c <= (a + b).min(2 * level - a - b) && (a + b + c) % 2 == 0;
    Ok(ok as u32)
}

/// `c(sl_r, ℓ) = ℓ(r²-1)/(ℓ+r)`.
pub fn slr_central_charge(r: u32, level: u32) -> Rational {
    let (r, l) = (r as i64, level as i64);
    Rational::frac(l * (r * r - 1), l + r)
}

/// `w(μ)` for an sl_r highest weight written as a non-increasing `r`-tuple.
pub fn slr_conformal_weight(level: u32, mu: &[i64]) -> Rational {
    let r = mu.len() as i64;
    let sq: i64 = mu.iter().map(|m| m * m).sum();
    let s: i64 = mu.iter().sum();
    let lin: i64 = mu.iter().enumerate().map(|(i, m)| (r - 2 * (i as i64 + 1) + 1) * m).sum();
    let inner = Rational::from(sq) - Rational::frac(s * s, r) + Rational::from(lin);
    inner / Rational::from(2 * (level as i64 + r))
}

/// Conformal anomaly and weights at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct VerlindeWeightData {
    pub level: u32,
    pub central_charge: Rational,
    pub weights: Vec<Rational>,
}

impl VerlindeWeightData {
    /// `c = 3ℓ/(ℓ+2)` and `w(a) = a(a+2)/(4(ℓ+2))`.
    pub fn new(level: u32) -> Result<Self> {
        check_level(level)?;
        let weights = (0..=level as i64).map(|a| slr_conformal_weight(level, &[a, 0])).collect();
        Ok(VerlindeWeightData { level, central_charge: slr_central_charge(2, level), weights })
    }

    /// `c/24 - w(a)`, the exponent rate of the R-matrix.
    pub fn rate(&self, a: usize) -> Rational {
        &self.central_charge / &Rational::from(24) - self.weights[a].clone()
    }
}

/// The fusion algebra at level `ℓ`.
pub fn verlinde_frobenius(level: u32) -> Result<FrobeniusData> {
    check_level(level)?;
    let d = level as usize + 1;
    let labels = (0..d).map(|a| format!("w{a}")).collect();
    FrobeniusData::new(
        labels,
        Matrix::identity(d),
        |a, b, c| Rational::from(sl2_fusion(level, a as u32, b as u32, c as u32).expect("weights in range")),
        0,
    )
}

/// `rk V_g(a_1, …, a_n)` by gluing in the fusion algebra.
pub fn verlinde_rank(level: u32, g: u32, weights: &[u32]) -> Result<u64> {
    if 2 * g as i64 - 2 + weights.len() as i64 <= 0 {
        return Err(Error::UnstablePair { g, n: weights.len() });
    }
    check_weights(level, weights)?;
    let f = verlinde_frobenius(level)?;
    let idx: Vec<usize> = weights.iter().map(|&a| a as usize).collect();
    let v = f.topological_correlator_basis(g, &idx)?;
    v.to_i64()
        .and_then(|x| u64::try_from(x).ok())
        .ok_or_else(|| Error::InvalidTheory(format!("rank {v} is not a non-negative integer")))
}

fn tconst(c: &Rational, t_order: usize) -> TPoly {
    TruncSeries::truncated(Var::T, t_order, vec![c.clone()])
}

/// Diagonal R-matrix through `z^order`, with `t` truncated at `t_order`.
pub fn verlinde_rmatrix(level: u32, order: usize, t_order: usize) -> Result<RMatrix<TPoly>> {
    let data = VerlindeWeightData::new(level)?;
    let d = level as usize + 1;
    let zero = tconst(&Rational::zero(), t_order);
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut m = Matrix::from_fn(d, d, |_, _| zero.clone());
        for a in 0..d {
            let mut c = vec![Rational::zero(); k + 1];
            c[k] = data.rate(a).pow(k as u32) / Rational::factorial(k as u32);
            m.set(a, a, TruncSeries::truncated(Var::T, t_order, c));
        }
        coeffs.push(m);
    }
    RMatrix::new(coeffs)
}

/// Inverse of [`verlinde_rmatrix`], i.e. `t -> -t`: the matrix the engine's
/// R-action needs to produce `ch_t`.
pub fn verlinde_action_rmatrix(level: u32, order: usize, t_order: usize) -> Result<RMatrix<TPoly>> {
    let printed = verlinde_rmatrix(level, order, t_order)?;
    let minus = Rational::from(-1);
    let coeffs = (0..=order).map(|k| printed.coeff(k).map(|c| c.rescale_var(&minus))).collect();
    RMatrix::new(coeffs)
}

/// Fusion data and R-matrix over `Q[t]/(t^{t_order+1})`.
pub fn verlinde_theory(level: u32, order: usize, t_order: usize) -> Result<Theory<TPoly>> {
    let frobenius = verlinde_frobenius(level)?.map_ring(|c| tconst(c, t_order))?;
    Ok(Theory { frobenius, rmatrix: verlinde_action_rmatrix(level, order, t_order)? })
}

/// `∫_{M̄_{g,n}} ch_t(V_g(a)) Π ψ_i^{b_i}` as a polynomial in `t`.
/// `t_order` defaults to `3g-3+n`.
pub fn verlinde_correlator(
    level: u32,
    g: u32,
    weights: &[u32],
    psi: &[u32],
    t_order: Option<usize>,
) -> Result<TPoly> {
    let n = weights.len();
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::UnstablePair { g, n });
    }
    if psi.len() != n {
        return Err(Error::Range(format!("{} ψ exponents for {n} markings", psi.len())));
    }
    check_weights(level, weights)?;
    let dim = (3 * g as i64 - 3 + n as i64) as usize;
    let engine = Engine::new(verlinde_theory(level, dim, t_order.unwrap_or(dim))?)?;
    verlinde_correlator_with(&engine, g, weights, psi)
}

/// [`verlinde_correlator`] on a prebuilt engine.
pub fn verlinde_correlator_with(engine: &Engine<TPoly>, g: u32, weights: &[u32], psi: &[u32]) -> Result<TPoly> {
    let ins: Vec<Insertion<TPoly>> = weights
        .iter()
        .zip(psi)
        .map(|(&a, &b)| Insertion::new(engine.frobenius().basis(a as usize), b))
        .collect();
    engine.correlator(g, &ins)
}

/// Separating and non-separating contractions of the ranks, and
/// agreement of the two gluing orders, over non-decreasing weight tuples.
pub fn rank_gluing_checks(level: u32, max_g: u32, max_n: usize) -> Result<Vec<AxiomCheck>> {
    let f = verlinde_frobenius(level)?;
    let d = f.dim() as u32;
    let rank = |g: u32, w: &[u32]| verlinde_rank(level, g, w);
    let mut checks = Vec::new();
    for g in 0..=max_g {
        for n in 0..=max_n {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            for w in nondecreasing(d, n) {
                let total = rank(g, &w)?;
                let vecs: Vec<Vec<Rational>> = w.iter().map(|&a| f.basis(a as usize)).collect();
                let glued = f.topological_correlator_by_gluing(g, &vecs)?;
                checks.push(AxiomCheck {
                    name: "gluing-order".into(),
                    passed: glued == Rational::from(total as i64),
                    detail: format!("ℓ={level} g={g} w={w:?}: {total} vs {glued}"),
                });
                if g > 0 {
                    let mut sum = 0;
                    for mu in 0..d {
                        let mut ext = w.clone();
                        ext.extend([mu, mu]);
                        sum += rank(g - 1, &ext)?;
                    }
                    checks.push(AxiomCheck {
                        name: "non-separating".into(),
                        passed: sum == total,
                        detail: format!("ℓ={level} g={g} w={w:?}: {total} vs {sum}"),
                    });
                }
                for k in 0..=n {
                    for g1 in 0..=g {
                        let g2 = g - g1;
                        if 2 * g1 as i64 - 1 + k as i64 <= 0 || 2 * g2 as i64 - 1 + (n - k) as i64 <= 0 {
                            continue;
                        }
                        let mut sum = 0;
                        for mu in 0..d {
                            let mut left = w[..k].to_vec();
                            left.push(mu);
                            let mut right = vec![mu];
                            right.extend_from_slice(&w[k..]);
                            sum += rank(g1, &left)? * rank(g2, &right)?;
                        }
                        checks.push(AxiomCheck {
                            name: "separating".into(),
                            passed: sum == total,
                            detail: format!("ℓ={level} g={g}={g1}+{g2} w={w:?} split {k}: {total} vs {sum}"),
                        });
                    }
                }
            }
        }
    }
    Ok(checks)
}

fn nondecreasing(d: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u32>| {
                let start = w.last().copied().unwrap_or(0);
                (start..d).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Degree-zero part of the level-1 even-graph formula against the rank.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenRankReport {
    pub g: u32,
    pub n: usize,
    /// `Σ 2^{g-h¹(Γ)}/|Aut Γ|` over edgeless even graphs
    pub formula: u64,
    pub rank: u64,
    /// even graphs whose vertex ranks multiply to `2^{g-h¹}`
    pub vertex_checks: usize,
    pub even_graphs: usize,
    pub passed: bool,
}

/// Level 1 with `n` insertions of the standard representation.
pub fn level1_even_rank_check(g: u32, n: usize) -> Result<EvenRankReport> {
    let graphs = stable_graphs(g, n)?;
    let even = even_subset(&graphs);
    let rank = verlinde_rank(1, g, &vec![1; n])?;
    let mut formula = 0;
    let mut vertex_checks = 0;
    for gc in &even {
        let gr = &gc.graph;
        let expected = 1u64 << (g as usize - gr.h1());
        let mut prod = 1;
        for (v, &val) in gr.valences().iter().enumerate() {
            prod *= verlinde_rank(1, gr.genera()[v], &vec![1; val])?;
        }
        if prod == expected {
            vertex_checks += 1;
        }
        if gr.num_edges() == 0 {
            formula += expected / gc.aut;
        }
    }
    let passed = formula == rank && vertex_checks == even.len();
    Ok(EvenRankReport { g, n, formula, rank, vertex_checks, even_graphs: even.len(), passed })
}
