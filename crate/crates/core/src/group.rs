//! Concrete finite groups stored as dense multiplication tables.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numbers::factorize;

/// Size limits applied across the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest group order that may be materialised as a table.
    pub table_cap: usize,
    /// Largest group order for which full subgroup lattices are built.
    pub lattice_cap: usize,
    /// Largest number of subgroups a lattice may hold.
    pub subgroup_count_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            table_cap: 2048,
            lattice_cap: 256,
            subgroup_count_cap: 100_000,
        }
    }
}

/// A validated finite group. Element 0 is always the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    elem_order: Vec<u32>,
    factorization: Vec<(u64, u32)>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("order", &self.order)
            .field("factorization", &self.factorization)
            .finish_non_exhaustive()
    }
}

/// JSON interchange form: `{ "order": n, "table": [[...]], "labels": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl Group {
    /// Validates a raw table and builds the group.
    pub fn from_table(table: &[Vec<i64>]) -> Result<Group> {
        Group::from_table_capped(table, &Caps::default())
    }

    pub fn from_table_capped(table: &[Vec<i64>], caps: &Caps) -> Result<Group> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Malformed("empty table".into()));
        }
        if n > caps.table_cap {
            return Err(Error::OrderCapExceeded {
                order: n,
                cap: caps.table_cap,
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!(
                    "row {r} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                if v < 0 || v as usize >= n {
                    return Err(Error::NotClosed {
                        row: r,
                        col: c,
                        value: v,
                    });
                }
                flat.push(v as u32);
            }
        }
        validate_flat(n, &flat)?;
        Ok(Group::from_flat_unchecked(n, flat, None))
    }

    pub fn from_json(j: &GroupJson) -> Result<Group> {
        if j.order != j.table.len() {
            return Err(Error::Malformed(format!(
                "declared order {} but table has {} rows",
                j.order,
                j.table.len()
            )));
        }
        let mut g = Group::from_table(&j.table)?;
        if let Some(labels) = &j.labels {
            if labels.len() != j.order {
                return Err(Error::Malformed("label count differs from order".into()));
            }
            g.labels = Some(labels.clone());
        }
        Ok(g)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            order: self.order,
            table: (0..self.order)
                .map(|a| self.row(a).iter().map(|&x| x as i64).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    /// Builds a group from a table produced by a trusted construction
    /// (closure, quotient, product). Axioms are only checked in debug builds.
    pub(crate) fn from_flat_unchecked(
        n: usize,
        table: Vec<u32>,
        labels: Option<Vec<String>>,
    ) -> Group {
        debug_assert_eq!(table.len(), n * n);
        debug_assert!(validate_flat(n, &table).is_ok());
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let row = &table[a * n..a * n + n];
            inverse[a] = row.iter().position(|&x| x == 0).unwrap_or(0) as u32;
        }
        let mut elem_order = vec![1u32; n];
        for a in 1..n {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * n + a] as usize;
                k += 1;
            }
            elem_order[a] = k;
        }
        Group {
            order: n,
            factorization: factorize(n as u64),
            table,
            inverse,
            elem_order,
            labels,
        }
    }

    pub(crate) fn checked_order(n: usize, caps: &Caps) -> Result<()> {
        if n > caps.table_cap {
            Err(Error::OrderCapExceeded {
                order: n,
                cap: caps.table_cap,
            })
        } else {
            Ok(())
        }
    }

    /// Closure of permutation generators on `n` points (0-based images).
    ///
    /// Elements are discovered breadth-first from the identity, multiplying
    /// each known element on the right by every generator in order. The
    /// product `a*b` applies `a` first, then `b`.
    pub fn from_permutations(n: usize, gens: &[Vec<u32>], caps: &Caps) -> Result<Group> {
        for g in gens {
            if g.len() != n {
                return Err(Error::InvalidPermutation(format!(
                    "expected {n} images, got {}",
                    g.len()
                )));
            }
            let mut seen = vec![false; n];
            for &x in g {
                let x = x as usize;
                if x >= n || seen[x] {
                    return Err(Error::InvalidPermutation(format!("{g:?} is not a bijection")));
                }
                seen[x] = true;
            }
        }
        let identity: Vec<u32> = (0..n as u32).collect();
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let prod: Vec<u32> = elems[i].iter().map(|&x| g[x as usize]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= caps.table_cap {
                        return Err(Error::OrderCapExceeded {
                            order: elems.len() + 1,
                            cap: caps.table_cap,
                        });
                    }
                    index.insert(prod.clone(), elems.len() as u32);
                    queue.push_back(elems.len());
                    elems.push(prod);
                }
            }
        }
        let m = elems.len();
        let mut table = vec![0u32; m * m];
        let mut buf = vec![0u32; n];
        for a in 0..m {
            for b in 0..m {
                for x in 0..n {
                    buf[x] = elems[b][elems[a][x] as usize];
                }
                table[a * m + b] = index[&buf];
            }
        }
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        Ok(Group::from_flat_unchecked(m, table, Some(labels)))
    }

    pub fn trivial() -> Group {
        Group::from_flat_unchecked(1, vec![0], Some(vec!["e".into()]))
    }

    /// External direct product; element `(x, y)` has index `x * |Y| + y`.
    pub fn direct_product(x: &Group, y: &Group, caps: &Caps) -> Result<Group> {
        let (nx, ny) = (x.order, y.order);
        let n = nx * ny;
        Group::checked_order(n, caps)?;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            let (a1, a2) = (a / ny, a % ny);
            for b in 0..n {
                let (b1, b2) = (b / ny, b % ny);
                table[a * n + b] = (x.mul(a1, b1) * ny + y.mul(a2, b2)) as u32;
            }
        }
        let labels = (0..n)
            .map(|a| format!("({},{})", x.label(a / ny), y.label(a % ny)))
            .collect();
        Ok(Group::from_flat_unchecked(n, table, Some(labels)))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g⁻¹ a g`.
    #[inline]
    pub fn conj(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    /// `a⁻¹ b⁻¹ a b`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let k = k % self.elem_order[a] as u64;
        (0..k).fold(0, |x, _| self.mul(x, a))
    }

    #[inline]
    pub fn elem_order(&self, a: usize) -> usize {
        self.elem_order[a] as usize
    }

    pub fn elem_orders(&self) -> &[u32] {
        &self.elem_order
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn raw_table(&self) -> &[u32] {
        &self.table
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn primes(&self) -> Vec<u64> {
        self.factorization.iter().map(|&(p, _)| p).collect()
    }

    /// `|G|_p`, the order of a Sylow `p`-subgroup.
    pub fn p_part(&self, p: u64) -> usize {
        self.factorization
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(1, |&(q, k)| q.pow(k) as usize)
    }

    /// Order of a Hall `π`-subgroup.
    pub fn pi_part(&self, pi: &[u64]) -> usize {
        pi.iter().map(|&p| self.p_part(p)).product()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> usize {
        self.elem_order
            .iter()
            .fold(1, |acc, &o| crate::numbers::lcm(acc as u64, o as u64) as usize)
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            for g in 0..n {
                let c = self.conj(a, g);
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// Invariant fingerprint used for corpus deduplication. Isomorphic groups
    /// share a fingerprint; the converse can fail.
    pub fn fingerprint(&self) -> Fingerprint {
        let mut class_sizes: Vec<usize> = self.conjugacy_classes().iter().map(Vec::len).collect();
        class_sizes.sort_unstable();
        let mut elem_orders: Vec<u32> = self.elem_order.clone();
        elem_orders.sort_unstable();
        Fingerprint {
            order: self.order,
            exponent: self.exponent(),
            abelian: self.is_abelian(),
            class_sizes,
            elem_orders,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub order: usize,
    pub exponent: usize,
    pub abelian: bool,
    pub class_sizes: Vec<usize>,
    pub elem_orders: Vec<u32>,
}

fn validate_flat(n: usize, t: &[u32]) -> Result<()> {
    let at = |a: usize, b: usize| t[a * n + b] as usize;
    for a in 0..n {
        if at(0, a) != a || at(a, 0) != a {
            return Err(Error::NoIdentity);
        }
    }
    for a in 0..n {
        let ok = (0..n).any(|b| at(a, b) == 0 && at(b, a) == 0);
        if !ok {
            return Err(Error::NoInverse(a));
        }
    }
    let mut seen = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let v = at(a, b);
            if seen[v] == a {
                return Err(Error::NotLatinSquare(format!("row {a} repeats {v}")));
            }
            seen[v] = a;
        }
    }
    seen.fill(usize::MAX);
    for b in 0..n {
        for a in 0..n {
            let v = at(a, b);
            if seen[v] == b {
                return Err(Error::NotLatinSquare(format!("column {b} repeats {v}")));
            }
            seen[v] = b;
        }
    }
    // Light's test on a generating set: the elements s with (xs)y = x(sy)
    // for all x, y are closed under products, so checking generators whose
    // left-associated products reach every element is enough.
    let mut gens: Vec<usize> = Vec::new();
    let mut covered = vec![false; n];
    covered[0] = true;
    for a in 1..n {
        if covered[a] {
            continue;
        }
        gens.push(a);
        covered.fill(false);
        covered[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                let y = at(x, s);
                if !covered[y] {
                    covered[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    for &s in &gens {
        for x in 0..n {
            let xs = at(x, s);
            for y in 0..n {
                if at(xs, y) != at(x, at(s, y)) {
                    return Err(Error::NotAssociative { a: x, b: s, c: y });
                }
            }
        }
    }
    Ok(())
}

/// Cycle notation on 1-based points, `()` for the identity.
pub fn cycle_notation(perm: &[u32]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(x + 1).to_string());
            first = false;
            x = perm[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tbl(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn trivial_table() {
        let g = Group::from_table(&tbl(&[&[0]])).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.factorization().is_empty());
    }

    #[test]
    fn c2_table() {
        let g = Group::from_table(&tbl(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(g.elem_orders(), &[1, 2]);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn repeated_row_entry_is_rejected() {
        // Row 2 is [2, 2, 0]; every element still has an inverse.
        let err = Group::from_table(&tbl(&[&[0, 1, 2], &[1, 0, 2], &[2, 2, 0]])).unwrap_err();
        assert!(matches!(err, Error::NotLatinSquare(_)), "{err:?}");
    }

    #[test]
    fn non_associative_loop_is_rejected() {
        // Smallest non-associative loop (order 5), identity 0.
        let t = tbl(&[
            &[0, 1, 2, 3, 4],
            &[1, 0, 3, 4, 2],
            &[2, 4, 0, 1, 3],
            &[3, 2, 4, 0, 1],
            &[4, 3, 1, 2, 0],
        ]);
        let err = Group::from_table(&t).unwrap_err();
        let Error::NotAssociative { a, b, c } = err else {
            panic!("{err:?}")
        };
        let m = |x: usize, y: usize| t[x][y] as usize;
        assert_ne!(m(m(a, b), c), m(a, m(b, c)));
    }

    #[test]
    fn out_of_range_and_identity_errors() {
        assert!(matches!(
            Group::from_table(&tbl(&[&[0, 2], &[1, 0]])),
            Err(Error::NotClosed { .. })
        ));
        assert!(matches!(
            Group::from_table(&tbl(&[&[1, 0], &[0, 1]])),
            Err(Error::NoIdentity)
        ));
        let caps = Caps {
            table_cap: 1,
            ..Caps::default()
        };
        assert!(matches!(
            Group::from_table_capped(&tbl(&[&[0, 1], &[1, 0]]), &caps),
            Err(Error::OrderCapExceeded { .. })
        ));
    }

    #[test]
    fn permutation_closure() {
        let caps = Caps::default();
        // (1 2 3) and (1 2) on 3 points
        let s3 = Group::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], &caps).unwrap();
        assert_eq!(s3.order(), 6);
        let triv = Group::from_permutations(3, &[], &caps).unwrap();
        assert_eq!(triv.order(), 1);
        // (1 2)(3 4), (1 3)(2 4)
        let v4 = Group::from_permutations(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], &caps)
            .unwrap();
        assert_eq!(v4.order(), 4);
        assert!((1..4).all(|a| v4.elem_order(a) == 2));
        assert!(matches!(
            Group::from_permutations(3, &[vec![0, 0, 1]], &caps),
            Err(Error::InvalidPermutation(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let caps = Caps::default();
        let s3 = Group::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]], &caps).unwrap();
        let j = serde_json::to_string(&s3.to_json()).unwrap();
        let back = Group::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, s3);
    }

    #[test]
    fn cycle_labels() {
        assert_eq!(cycle_notation(&[1, 2, 0, 3]), "(1 2 3)");
        assert_eq!(cycle_notation(&[0, 1]), "()");
        assert_eq!(cycle_notation(&[1, 0, 3, 2]), "(1 2)(3 4)");
    }
}
