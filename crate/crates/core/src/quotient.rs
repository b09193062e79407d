//! Quotient groups `G/N` with the canonical projection.

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::subgroup::{is_normal, Subgroup};

/// `G/N` with the projection `G → G/N`.
///
/// Cosets are numbered by ascending smallest member, so coset 0 is `N`
/// and the construction is canonical.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    kernel: Subgroup,
    target: Group,
    proj: Vec<u32>,
    coset_reps: Vec<usize>,
}

impl QuotientMap {
    pub fn new(g: &Group, n: &Subgroup) -> Result<QuotientMap> {
        if n.members().capacity() != g.order() || !is_normal(g, n) {
            return Err(Error::NotNormal);
        }
        Ok(QuotientMap::new_unchecked(g, n))
    }

    /// Callers guarantee `n` is normal in `g`.
    pub(crate) fn new_unchecked(g: &Group, n: &Subgroup) -> QuotientMap {
        let order = g.order();
        let n_elems = n.elements();
        let mut proj = vec![u32::MAX; order];
        let mut coset_reps = Vec::with_capacity(order / n_elems.len());
        for a in 0..order {
            if proj[a] != u32::MAX {
                continue;
            }
            let id = coset_reps.len() as u32;
            coset_reps.push(a);
            for &x in &n_elems {
                proj[g.mul(a, x)] = id;
            }
        }
        let q = coset_reps.len();
        let mut table = vec![0u32; q * q];
        for (i, &a) in coset_reps.iter().enumerate() {
            for (j, &b) in coset_reps.iter().enumerate() {
                table[i * q + j] = proj[g.mul(a, b)];
            }
        }
        let labels = coset_reps.iter().map(|&a| format!("{}N", g.label(a))).collect();
        QuotientMap {
            kernel: n.clone(),
            target: Group::from_flat_unchecked(q, table, Some(labels)),
            proj,
            coset_reps,
        }
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn proj(&self, a: usize) -> usize {
        self.proj[a] as usize
    }

    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    /// `HN/N`.
    pub fn push_forward(&self, h: &Subgroup) -> Subgroup {
        let set = ElemSet::from_indices(self.target.order(), h.members().iter().map(|a| self.proj(a)));
        Subgroup::from_set_unchecked(set)
    }

    /// The full preimage of a subgroup of the quotient.
    pub fn pull_back(&self, k: &Subgroup) -> Subgroup {
        let set = ElemSet::from_indices(
            self.proj.len(),
            (0..self.proj.len()).filter(|&a| k.contains(self.proj(a))),
        );
        Subgroup::from_set_unchecked(set)
    }
}
