//! Characteristic subgroups referred to by name.

use std::fmt;

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::group::{Caps, Group};
use crate::lattice::SubgroupLattice;
use crate::numbers::{is_power_of, is_prime};
use crate::quotient::QuotientMap;
use crate::subgroup::{center, is_nilpotent_subgroup, join_permuting, normal_subgroups, Subgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedTag {
    Center,
    Frattini,
    Fitting,
    /// `O_p`
    PCore(u64),
    /// `O_{p'}`
    PPrimeCore(u64),
    /// `O^p`
    PResidual(u64),
    /// `O_{p',p}`
    PPrimePCore(u64),
}

impl NamedTag {
    pub fn parse(s: &str) -> Result<NamedTag> {
        let prime = |a: &str| -> Result<u64> {
            let p: u64 = a.trim().parse().map_err(|_| Error::UnknownTag(s.into()))?;
            if is_prime(p) {
                Ok(p)
            } else {
                Err(Error::UnknownTag(format!("{s}: {p} is not prime")))
            }
        };
        Ok(match s.split_once(':') {
            None => match s {
                "center" => NamedTag::Center,
                "frattini" => NamedTag::Frattini,
                "fitting" => NamedTag::Fitting,
                _ => return Err(Error::UnknownTag(s.into())),
            },
            Some(("O_p", p)) => NamedTag::PCore(prime(p)?),
            Some(("O_p'", p)) => NamedTag::PPrimeCore(prime(p)?),
            Some(("O^p", p)) => NamedTag::PResidual(prime(p)?),
            Some(("O_p',p", p)) => NamedTag::PPrimePCore(prime(p)?),
            _ => return Err(Error::UnknownTag(s.into())),
        })
    }

    pub fn needs_lattice(&self) -> bool {
        matches!(self, NamedTag::Frattini)
    }
}

impl fmt::Display for NamedTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedTag::Center => write!(f, "center"),
            NamedTag::Frattini => write!(f, "frattini"),
            NamedTag::Fitting => write!(f, "fitting"),
            NamedTag::PCore(p) => write!(f, "O_p:{p}"),
            NamedTag::PPrimeCore(p) => write!(f, "O_p':{p}"),
            NamedTag::PResidual(p) => write!(f, "O^p:{p}"),
            NamedTag::PPrimePCore(p) => write!(f, "O_p',p:{p}"),
        }
    }
}

pub fn named_subgroup(g: &Group, tag: NamedTag, caps: &Caps) -> Result<Subgroup> {
    Ok(match tag {
        NamedTag::Center => center(g),
        NamedTag::Frattini => SubgroupLattice::build(g, caps)?.frattini(g),
        NamedTag::Fitting => fitting(g),
        NamedTag::PCore(p) => o_p(g, p),
        NamedTag::PPrimeCore(p) => o_p_prime(g, p),
        NamedTag::PResidual(p) => o_upper_p(g, p),
        NamedTag::PPrimePCore(p) => o_p_prime_p(g, p),
    })
}

fn join_of<'a>(g: &Group, subs: impl IntoIterator<Item = &'a Subgroup>) -> Subgroup {
    subs.into_iter()
        .fold(Subgroup::trivial(g), |acc, n| join_permuting(g, &acc, n))
}

pub fn fitting(g: &Group) -> Subgroup {
    let normals = normal_subgroups(g);
    join_of(g, normals.iter().filter(|n| is_nilpotent_subgroup(g, n)))
}

/// Largest normal `p`-subgroup.
pub fn o_p(g: &Group, p: u64) -> Subgroup {
    let normals = normal_subgroups(g);
    join_of(g, normals.iter().filter(|n| is_power_of(n.order(), p)))
}

/// Largest normal `p'`-subgroup.
pub fn o_p_prime(g: &Group, p: u64) -> Subgroup {
    let normals = normal_subgroups(g);
    join_of(g, normals.iter().filter(|n| !(n.order() as u64).is_multiple_of(p)))
}

/// Smallest normal subgroup with `p`-group quotient.
pub fn o_upper_p(g: &Group, p: u64) -> Subgroup {
    let mut acc = ElemSet::full(g.order());
    for n in normal_subgroups(g) {
        if is_power_of(g.order() / n.order(), p) {
            acc.intersect_with(n.members());
        }
    }
    Subgroup::from_set_unchecked(acc)
}

/// Preimage of `O_p(G/O_{p'}(G))`.
pub fn o_p_prime_p(g: &Group, p: u64) -> Subgroup {
    let q = QuotientMap::new_unchecked(g, &o_p_prime(g, p));
    q.pull_back(&o_p(q.target(), p))
}
