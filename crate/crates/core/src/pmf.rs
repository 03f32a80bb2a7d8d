//! Finite discrete distributions on the real line.

use alloc::vec::Vec;

use crate::{Error, Result, INV_TWO_PI_E};

/// Default distance under which two atom values are treated as one.
pub const DEFAULT_MERGE_EPS: f64 = 1e-9;

/// Largest normalization drift that is silently renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom {
    pub value: f64,
    pub prob: f64,
}

/// A distribution with finitely many atoms.
///
/// Atoms are sorted by strictly increasing value, every probability is
/// positive and the probabilities sum to one within `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    atoms: Vec<Atom>,
}

/// Minimum gap between distinct atom values; `+inf` for a single atom.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Spacing(f64);

impl Spacing {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn min(self, other: Spacing) -> Spacing {
        Spacing(self.0.min(other.0))
    }
}

/// Sum in ascending magnitude with Neumaier compensation.
pub(crate) fn stable_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_unstable_by(|a, b| a.abs().total_cmp(&b.abs()));
    let mut sum = 0.0;
    let mut carry = 0.0;
    for t in terms {
        let next = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - next) + t;
        } else {
            carry += (t - next) + sum;
        }
        sum = next;
    }
    sum + carry
}

/// Builds a [`Pmf`] from `(value, probability)` pairs.
///
/// Zero-probability pairs are dropped, values within `merge_eps` of each other
/// are merged into their probability-weighted mean, and a total mass within
/// `1e-9` of one is renormalized.
pub fn new_pmf(pairs: &[(f64, f64)], merge_eps: f64) -> Result<Pmf> {
    if !(merge_eps >= 0.0) || !merge_eps.is_finite() {
        return Err(Error::InvalidParameter {
            name: "merge_eps",
            value: merge_eps,
        });
    }
    if pairs.is_empty() {
        return Err(Error::EmptyPmf);
    }
    for &(value, prob) in pairs {
        if !value.is_finite() || !prob.is_finite() {
            return Err(Error::NonFinite { value, prob });
        }
        if prob < 0.0 {
            return Err(Error::NegativeProbability { value, prob });
        }
    }
    let total = stable_sum(pairs.iter().map(|&(_, p)| p).collect());
    if (total - 1.0).abs() > RENORMALIZE_TOL {
        return Err(Error::MassMismatch { total });
    }
    let atoms = pairs
        .iter()
        .filter(|&&(_, p)| p > 0.0)
        .map(|&(value, prob)| Atom { value, prob })
        .collect();
    Ok(Pmf::assemble(atoms, merge_eps))
}

impl Pmf {
    /// Sorts, merges and renormalizes atoms already known to carry mass close to one.
    fn assemble(mut atoms: Vec<Atom>, merge_eps: f64) -> Pmf {
        atoms.sort_unstable_by(|a, b| a.value.total_cmp(&b.value));

        // Groups of atoms closer than merge_eps (chained on consecutive values)
        // collapse to their probability-weighted mean, taken relative to the
        // first value so that singleton groups keep their value bit-for-bit.
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        let mut start = 0;
        while start < atoms.len() {
            let mut end = start + 1;
            while end < atoms.len() && atoms[end].value - atoms[end - 1].value <= merge_eps {
                end += 1;
            }
            let group = &atoms[start..end];
            let anchor = group[0].value;
            let mass: f64 = group.iter().map(|a| a.prob).sum();
            let offset: f64 = group.iter().map(|a| a.prob * (a.value - anchor)).sum();
            merged.push(Atom {
                value: anchor + offset / mass,
                prob: mass,
            });
            start = end;
        }

        let total = stable_sum(merged.iter().map(|a| a.prob).collect());
        for atom in &mut merged {
            atom.prob /= total;
        }
        Pmf { atoms: merged }
    }

    pub fn singleton(value: f64) -> Pmf {
        Pmf {
            atoms: alloc::vec![Atom { value, prob: 1.0 }],
        }
    }

    /// Equal mass on each of `values` (duplicates merge).
    pub fn equiprobable(values: &[f64]) -> Result<Pmf> {
        let p = 1.0 / values.len() as f64;
        let pairs: Vec<(f64, f64)> = values.iter().map(|&v| (v, p)).collect();
        new_pmf(&pairs, DEFAULT_MERGE_EPS)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// Always false; a `Pmf` holds at least one atom.
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.value)
    }

    pub fn probs(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.prob)
    }

    pub fn total_mass(&self) -> f64 {
        stable_sum(self.probs().collect())
    }

    /// Same probabilities with every value moved by `offset`.
    pub fn shifted(&self, offset: f64) -> Pmf {
        Pmf {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    value: a.value + offset,
                    prob: a.prob,
                })
                .collect(),
        }
    }

    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.atoms.iter().map(|a| (a.value, a.prob)).collect()
    }

    /// Heaviest atoms, in value order, that together carry at least `1 - mass_tol`.
    ///
    /// The notion of an "effective" support is not pinned down anywhere this
    /// library relies on; this is a convenience for reporting only.
    pub fn effective_support(&self, mass_tol: f64) -> Vec<Atom> {
        let mut by_mass = self.atoms.clone();
        by_mass.sort_by(|a, b| b.prob.total_cmp(&a.prob));
        let mut kept = Vec::new();
        let mut covered = 0.0;
        for atom in by_mass {
            if covered >= 1.0 - mass_tol {
                break;
            }
            covered += atom.prob;
            kept.push(atom);
        }
        kept.sort_by(|a, b| a.value.total_cmp(&b.value));
        kept
    }
}

/// `-sum p ln p` in nats.
pub fn discrete_entropy(p: &Pmf) -> f64 {
    let terms = p
        .probs()
        .map(|q| if q >= 1.0 { 0.0 } else { -q * libm::log(q) })
        .collect();
    stable_sum(terms).max(0.0)
}

/// `exp(2 H) / (2 pi e)`.
pub fn discrete_entropy_power(p: &Pmf) -> f64 {
    INV_TWO_PI_E * libm::exp(2.0 * discrete_entropy(p))
}

pub fn min_spacing(p: &Pmf) -> Spacing {
    let gap = p
        .atoms
        .windows(2)
        .map(|w| w[1].value - w[0].value)
        .fold(f64::INFINITY, f64::min);
    Spacing(gap)
}

/// Distribution of `X + Y` for independent `X` and `Y`.
pub fn convolve(x: &Pmf, y: &Pmf, merge_eps: f64) -> Pmf {
    let mut atoms = Vec::with_capacity(x.len() * y.len());
    for a in &x.atoms {
        for b in &y.atoms {
            atoms.push(Atom {
                value: a.value + b.value,
                prob: a.prob * b.prob,
            });
        }
    }
    Pmf::assemble(atoms, merge_eps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpacingCheck {
    pub alpha_x: Spacing,
    pub alpha_y: Spacing,
    pub alpha_z: Spacing,
    pub holds: bool,
}

/// Bound on the rounding in a gap between two computed sums `x_i + y_j`.
fn sum_rounding(x: &Pmf, y: &Pmf) -> f64 {
    let scale = |p: &Pmf| p.values().fold(0.0_f64, |m, v| m.max(v.abs()));
    4.0 * f64::EPSILON * (scale(x) + scale(y))
}

/// Checks that the sum never has wider minimum spacing than either summand,
/// up to the rounding of the atom sums.
pub fn spacing_bound_holds(x: &Pmf, y: &Pmf, merge_eps: f64) -> SpacingCheck {
    let alpha_x = min_spacing(x);
    let alpha_y = min_spacing(y);
    let alpha_z = min_spacing(&convolve(x, y, merge_eps));
    SpacingCheck {
        alpha_x,
        alpha_y,
        alpha_z,
        holds: alpha_z.value() <= alpha_x.min(alpha_y).value() + sum_rounding(x, y),
    }
}
