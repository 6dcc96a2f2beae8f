//! P-spectra, the partition of state descriptions by spectrum, the group of
//! spectrum-preserving atom permutations, and the finite orbit-counting
//! ratio.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lang::{atom_count, gamma_of, StateDescription};
use crate::limits::Limits;
use crate::perms::{next_permutation, AtomPermutation, Permutation};
use crate::rational::Rational;

/// `⟨M_0, …, M_q⟩`; each multiset is stored sorted in descending order so
/// that equal spectra are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PSpectrum {
    levels: Vec<Vec<usize>>,
}

impl PSpectrum {
    pub fn from_levels(mut levels: Vec<Vec<usize>>) -> Self {
        for m in &mut levels {
            m.sort_unstable_by(|a, b| b.cmp(a));
        }
        PSpectrum { levels }
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    /// Number of constants the spectrum accounts for.
    pub fn total(&self) -> usize {
        self.levels.iter().flatten().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.levels)
    }
}

impl fmt::Display for PSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .levels
            .iter()
            .map(|m| {
                let inner: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "<{}>", parts.join(","))
    }
}

pub fn pspectrum(sd: &StateDescription) -> PSpectrum {
    let q = sd.q();
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &h in sd.atoms() {
        *counts.entry(h).or_default() += 1;
    }
    let mut levels = vec![Vec::new(); q + 1];
    for (h, c) in counts {
        levels[gamma_of(h)].push(c);
    }
    PSpectrum::from_levels(levels)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumCell {
    pub spectrum: PSpectrum,
    /// Members in lexicographic order.
    pub members: Vec<StateDescription>,
}

/// Partitions all `(2^q)^n` descriptions of length `n` by spectrum. Cells are
/// ordered by their lexicographically first member.
pub fn spectrum_partition(q: usize, n: usize, limits: &Limits) -> Result<Vec<SpectrumCell>> {
    let mut index: HashMap<PSpectrum, usize> = HashMap::new();
    let mut cells: Vec<SpectrumCell> = Vec::new();
    for sd in StateDescription::enumerate(q, n, limits)? {
        let spectrum = pspectrum(&sd);
        match index.get(&spectrum) {
            Some(&i) => cells[i].members.push(sd),
            None => {
                index.insert(spectrum.clone(), cells.len());
                cells.push(SpectrumCell {
                    spectrum,
                    members: vec![sd],
                });
            }
        }
    }
    Ok(cells)
}

/// Atoms of `L_q` grouped by negation count.
pub fn gamma_levels(q: usize) -> Vec<Vec<usize>> {
    let mut levels = vec![Vec::new(); q + 1];
    for atom in 1..=atom_count(q) {
        levels[gamma_of(atom)].push(atom);
    }
    levels
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `∏_k C(q,k)!`, the order of the spectrum-preserving group.
pub fn spec_perm_group_order(q: usize) -> BigInt {
    (0..=q).map(|k| factorial(binomial(q, k))).product()
}

/// All atom permutations `σ` with `γ∘σ = γ`, in lexicographic order of
/// their images: the direct product of the symmetric groups on the
/// negation-count levels.
pub fn spec_perm_group(q: usize, limits: &Limits) -> Result<Vec<AtomPermutation>> {
    limits.check_q(q)?;
    if q > limits.group_q_max {
        return Err(Error::Guard(format!(
            "spectrum-preserving group for q = {q} exceeds the group guard q <= {}",
            limits.group_q_max
        )));
    }
    let order = spec_perm_group_order(q);
    let order_u64: u64 = order
        .try_into()
        .map_err(|_| Error::Guard(format!("group order for q = {q} overflows")))?;
    limits.check_count(order_u64, "spectrum-preserving group")?;

    let levels = gamma_levels(q);
    // Odometer over per-level arrangements. Lexicographic order on images
    // coincides with lexicographic order on the concatenated level images
    // only after sorting, so sort at the end.
    let mut arrangements: Vec<Vec<usize>> = levels.clone();
    let mut group = Vec::with_capacity(order_u64 as usize);
    loop {
        let mut image = vec![0; atom_count(q)];
        for (level, arr) in levels.iter().zip(&arrangements) {
            for (&src, &dst) in level.iter().zip(arr) {
                image[src - 1] = dst;
            }
        }
        group.push(AtomPermutation::from_gamma_preserving(
            q,
            Permutation::from_image_unchecked(image),
        ));
        let mut advanced = false;
        for (k, arr) in arrangements.iter_mut().enumerate().rev() {
            if next_permutation(arr) {
                advanced = true;
                break;
            }
            *arr = levels[k].clone();
        }
        if !advanced {
            break;
        }
    }
    group.sort();
    Ok(group)
}

/// Fraction of the orbit `Ῡ` of `upsilon` (under spectrum-preserving atom
/// permutations composed with constant permutations) whose first `n`
/// constants carry exactly `theta`.
pub fn spectrum_class_ratio(
    upsilon: &StateDescription,
    theta: &StateDescription,
    limits: &Limits,
) -> Result<Rational> {
    let orbit = spectrum_orbit(upsilon, limits)?;
    if theta.q() != upsilon.q() {
        return Err(Error::Bounds(format!(
            "theta is in L_{} but upsilon in L_{}",
            theta.q(),
            upsilon.q()
        )));
    }
    if theta.len() > upsilon.len() {
        return Err(Error::Bounds(format!(
            "theta has {} constants, upsilon only {}",
            theta.len(),
            upsilon.len()
        )));
    }
    let n = theta.len();
    let hits = orbit
        .iter()
        .filter(|phi| &phi.atoms()[..n] == theta.atoms())
        .count();
    Ok(Rational::new(BigInt::from(hits), BigInt::from(orbit.len())))
}

/// The deduplicated orbit of `upsilon` under atom permutations from the
/// spectrum-preserving group and all constant permutations.
pub fn spectrum_orbit(
    upsilon: &StateDescription,
    limits: &Limits,
) -> Result<HashSet<StateDescription>> {
    let q = upsilon.q();
    let n = upsilon.len();
    let group = spec_perm_group(q, limits)?;
    let const_perms: u64 = (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k)).unwrap_or(u64::MAX);
    limits.check_count(
        (group.len() as u64).saturating_mul(const_perms),
        "spectrum orbit",
    )?;
    let mut orbit = HashSet::new();
    for rho in Permutation::all(n) {
        let shuffled: Vec<usize> = rho.image().iter().map(|&i| upsilon.atoms()[i - 1]).collect();
        for sigma in &group {
            let atoms = shuffled.iter().map(|&h| sigma.apply(h)).collect();
            orbit.insert(StateDescription::from_parts_unchecked(q, atoms));
        }
    }
    Ok(orbit)
}
