//! Predicate, constant and atom permutations, and their actions on state
//! descriptions.
//!
//! Permutations are stored as one-line images over `1..=n` and act on the
//! left: `(σ∘ρ)(x) = σ(ρ(x))`.

use std::fmt;

use crate::error::{Error, Result};
use crate::lang::{atom_count, gamma_of, negated_in, StateDescription};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::Bounds(format!("{image:?} is not a permutation of 1..={n}")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::Bounds(format!("transposition ({a} {b}) outside 1..={n}")));
        }
        let mut image: Vec<usize> = (1..=n).collect();
        image.swap(a - 1, b - 1);
        Ok(Permutation { image })
    }

    pub(crate) fn from_image_unchecked(image: Vec<usize>) -> Self {
        Permutation { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x - 1]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Permutation {
            image: other.image.iter().map(|&x| self.apply(x)).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.len()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x - 1] = i + 1;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// All `n!` permutations in lexicographic order of their images.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=n).collect()),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { image: current })
    }
}

/// Advances `v` to its lexicographic successor; false when `v` was the last.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A permutation of the predicates `P_1..P_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredPermutation(pub Permutation);

/// A permutation of the constants `a_1..a_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstPermutation(pub Permutation);

/// A permutation of the atom indices `1..=2^q` of `L_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomPermutation {
    q: usize,
    perm: Permutation,
    gamma_preserving: bool,
}

impl AtomPermutation {
    pub fn new(q: usize, perm: Permutation) -> Result<Self> {
        if perm.len() != atom_count(q) {
            return Err(Error::DimensionMismatch {
                expected: atom_count(q),
                found: perm.len(),
            });
        }
        let gamma_preserving = preserves_gamma(&perm);
        Ok(AtomPermutation {
            q,
            perm,
            gamma_preserving,
        })
    }

    pub fn identity(q: usize) -> Self {
        AtomPermutation {
            q,
            perm: Permutation::identity(atom_count(q)),
            gamma_preserving: true,
        }
    }

    pub(crate) fn from_gamma_preserving(q: usize, perm: Permutation) -> Self {
        debug_assert!(preserves_gamma(&perm));
        AtomPermutation {
            q,
            perm,
            gamma_preserving: true,
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn apply(&self, atom: usize) -> usize {
        self.perm.apply(atom)
    }

    pub fn is_gamma_preserving(&self) -> bool {
        self.gamma_preserving
    }

    pub fn compose(&self, other: &AtomPermutation) -> Result<AtomPermutation> {
        AtomPermutation::new(self.q, self.perm.compose(&other.perm)?)
    }

    pub fn inverse(&self) -> AtomPermutation {
        AtomPermutation {
            q: self.q,
            perm: self.perm.inverse(),
            gamma_preserving: self.gamma_preserving,
        }
    }
}

impl fmt::Display for AtomPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.perm.fmt(f)
    }
}

fn preserves_gamma(perm: &Permutation) -> bool {
    perm.image()
        .iter()
        .enumerate()
        .all(|(i, &x)| gamma_of(i + 1) == gamma_of(x))
}

/// The atom permutation obtained by renaming each `P_k` to `P_{p(k)}`: the
/// sign at coordinate `k` of the source atom lands at coordinate `p(k)`.
pub fn induced_atom_perm(p: &PredPermutation) -> AtomPermutation {
    let q = p.0.len();
    let image = (1..=atom_count(q))
        .map(|atom| {
            let mut code = 0usize;
            for k in 1..=q {
                if negated_in(q, atom, k) {
                    code |= 1 << (q - p.0.apply(k));
                }
            }
            code + 1
        })
        .collect();
    AtomPermutation::from_gamma_preserving(q, Permutation::from_image_unchecked(image))
}

/// `h'_i = ap(h_{cp⁻¹(i)})`; omitted permutations act as the identity.
pub fn apply(
    sd: &StateDescription,
    ap: Option<&AtomPermutation>,
    cp: Option<&ConstPermutation>,
) -> Result<StateDescription> {
    if let Some(ap) = ap {
        if ap.q() != sd.q() {
            return Err(Error::Bounds(format!(
                "atom permutation of L_{} applied to a description of L_{}",
                ap.q(),
                sd.q()
            )));
        }
    }
    let h = sd.atoms();
    let moved: Vec<usize> = match cp {
        Some(cp) => {
            if cp.0.len() != h.len() {
                return Err(Error::Bounds(format!(
                    "constant permutation on {} constants applied to {} constants",
                    cp.0.len(),
                    h.len()
                )));
            }
            let inv = cp.0.inverse();
            (1..=h.len()).map(|i| h[inv.apply(i) - 1]).collect()
        }
        None => h.to_vec(),
    };
    let atoms = match ap {
        Some(ap) => moved.iter().map(|&x| ap.apply(x)).collect(),
        None => moved,
    };
    Ok(StateDescription::from_parts_unchecked(sd.q(), atoms))
}

/// The `q!` atom permutations induced by predicate permutations, in the
/// lexicographic order of the predicate permutations.
pub fn px_group(q: usize) -> Vec<AtomPermutation> {
    Permutation::all(q)
        .map(|p| induced_atom_perm(&PredPermutation(p)))
        .collect()
}
