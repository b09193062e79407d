//! Group constructor expressions.
//!
//! Grammar (version 1):
//!
//! ```text
//! expr  := atom ( "x" atom )*
//! atom  := NAME "(" args ")" | NAME | "perm" "[" gen ( "," gen )* "]" | "table" JSON
//! gen   := cycle+ | "()"
//! cycle := "(" point+ ")"        points are 1-based
//! ```
//!
//! Names: `C(n)`, `D(2n)`, `Dic(4n)`, `S(n)`, `A(n)`, `E(p,k)`, `SL23`
//! (also `SL(2,3)`), `M16`, `Q8`. The argument of `D` and `Dic` is the
//! group order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{Caps, Group, GroupJson};
use crate::numbers::is_prime;

pub const GRAMMAR_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupExpr {
    Cyclic(usize),
    Dihedral(usize),
    Dicyclic(usize),
    Symmetric(usize),
    Alternating(usize),
    Elementary(u64, u32),
    Sl23,
    M16,
    Q8,
    Perm(Vec<Vec<Vec<u32>>>),
    Table(Vec<Vec<i64>>),
    Product(Box<GroupExpr>, Box<GroupExpr>),
}

impl GroupExpr {
    pub fn product(a: GroupExpr, b: GroupExpr) -> GroupExpr {
        GroupExpr::Product(Box::new(a), Box::new(b))
    }

    /// Order of the group, computed without building it (None for literals).
    pub fn order_hint(&self) -> Option<u128> {
        use GroupExpr::*;
        Some(match self {
            Cyclic(n) | Dihedral(n) | Dicyclic(n) => *n as u128,
            Symmetric(n) => (1..=*n as u128).product(),
            Alternating(n) => ((1..=*n as u128).product::<u128>() / 2).max(1),
            Elementary(p, k) => (*p as u128).checked_pow(*k)?,
            Sl23 => 24,
            M16 | Q8 => 16 / if matches!(self, Q8) { 2 } else { 1 },
            Perm(_) | Table(_) => return None,
            Product(a, b) => a.order_hint()?.checked_mul(b.order_hint()?)?,
        })
    }

    pub fn evaluate(&self, caps: &Caps) -> Result<Group> {
        use GroupExpr::*;
        if let Some(n) = self.order_hint() {
            if n > caps.table_cap as u128 {
                return Err(Error::OrderCapExceeded {
                    order: n.min(usize::MAX as u128) as usize,
                    cap: caps.table_cap,
                });
            }
        }
        match self {
            Cyclic(n) => cyclic(*n),
            Dihedral(m) => dihedral(*m),
            Dicyclic(m) => dicyclic(*m),
            Symmetric(n) => symmetric(*n, caps),
            Alternating(n) => alternating(*n, caps),
            Elementary(p, k) => {
                if !is_prime(*p) {
                    return Err(Error::Parse(format!("E({p},{k}): {p} is not prime")));
                }
                let cp = cyclic(*p as usize)?;
                let mut g = Group::trivial();
                for _ in 0..*k {
                    g = Group::direct_product(&g, &cp, caps)?;
                }
                Ok(g)
            }
            Sl23 => sl23(caps),
            M16 => Ok(m16()),
            Q8 => dicyclic(8),
            Perm(gens) => {
                let n = gens
                    .iter()
                    .flatten()
                    .flatten()
                    .map(|&x| x as usize)
                    .max()
                    .unwrap_or(0);
                let perms = gens
                    .iter()
                    .map(|cycles| cycles_to_images(n, cycles))
                    .collect::<Result<Vec<_>>>()?;
                Group::from_permutations(n, &perms, caps)
            }
            Table(t) => Group::from_table_capped(t, caps),
            Product(a, b) => Group::direct_product(&a.evaluate(caps)?, &b.evaluate(caps)?, caps),
        }
    }
}

pub fn parse(s: &str) -> Result<GroupExpr> {
    let mut p = Parser { src: s, pos: 0 };
    let e = p.expr()?;
    p.ws();
    if p.pos != s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses and evaluates in one step.
pub fn build(s: &str, caps: &Caps) -> Result<Group> {
    parse(s)?.evaluate(caps)
}

impl FromStr for GroupExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupExpr::*;
        match self {
            Cyclic(n) => write!(f, "C({n})"),
            Dihedral(n) => write!(f, "D({n})"),
            Dicyclic(n) => write!(f, "Dic({n})"),
            Symmetric(n) => write!(f, "S({n})"),
            Alternating(n) => write!(f, "A({n})"),
            Elementary(p, k) => write!(f, "E({p},{k})"),
            Sl23 => write!(f, "SL23"),
            M16 => write!(f, "M16"),
            Q8 => write!(f, "Q8"),
            Perm(gens) => {
                write!(f, "perm[")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    if g.is_empty() {
                        write!(f, "()")?;
                    }
                    for c in g {
                        let pts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                write!(f, "]")
            }
            Table(t) => write!(f, "table{}", serde_json::to_string(t).map_err(|_| fmt::Error)?),
            Product(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

/// Parses generator lists such as `(1 2 3), (1 2)(3 4)` into cycles.
pub fn parse_cycle_list(s: &str) -> Result<Vec<Vec<Vec<u32>>>> {
    let mut p = Parser { src: s, pos: 0 };
    let mut gens = vec![p.generator()?];
    loop {
        p.ws();
        if p.eat(',') {
            gens.push(p.generator()?);
        } else {
            break;
        }
    }
    p.ws();
    if p.pos != s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(gens)
}

/// Converts 1-based cycles to a 0-based image array on `n` points.
pub fn cycles_to_images(n: usize, cycles: &[Vec<u32>]) -> Result<Vec<u32>> {
    let mut img: Vec<u32> = (0..n as u32).collect();
    let mut touched = vec![false; n];
    for c in cycles {
        for (i, &x) in c.iter().enumerate() {
            let x = x as usize;
            if x == 0 || x > n {
                return Err(Error::InvalidPermutation(format!("point {x} out of range")));
            }
            if touched[x - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "point {x} appears twice"
                )));
            }
            touched[x - 1] = true;
            img[x - 1] = c[(i + 1) % c.len()] - 1;
        }
    }
    Ok(img)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} in {:?}", self.pos, self.src))
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> String {
        self.ws();
        // `Q8xC(2)`: an `x` right after a digit is the product sign
        let rest = self.rest();
        let mut len = rest.len();
        let mut prev_digit = false;
        for (i, c) in rest.char_indices() {
            if !(c.is_ascii_alphanumeric() || c == '_') || (c == 'x' && prev_digit) {
                len = i;
                break;
            }
            prev_digit = c.is_ascii_digit();
        }
        let id = self.rest()[..len].to_string();
        self.pos += len;
        id
    }

    fn number(&mut self) -> Result<u64> {
        self.ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.err("expected a number"));
        }
        let v = self.rest()[..len]
            .parse()
            .map_err(|_| self.err("number out of range"))?;
        self.pos += len;
        Ok(v)
    }

    fn args(&mut self) -> Result<Vec<u64>> {
        self.expect('(')?;
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn expr(&mut self) -> Result<GroupExpr> {
        let mut e = self.atom()?;
        loop {
            self.ws();
            if self.rest().starts_with('x') || self.rest().starts_with('×') {
                self.pos += self.rest().chars().next().map_or(1, char::len_utf8);
                e = GroupExpr::product(e, self.atom()?);
            } else {
                return Ok(e);
            }
        }
    }

    fn atom(&mut self) -> Result<GroupExpr> {
        self.ws();
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        let name = self.ident();
        if name.is_empty() {
            return Err(self.err("expected a group name"));
        }
        self.ws();
        let has_args = self.rest().starts_with('(');
        let one = |p: &mut Self| -> Result<usize> {
            match p.args()?.as_slice() {
                [n] => Ok(*n as usize),
                _ => Err(p.err(&format!("{name} takes one argument"))),
            }
        };
        use GroupExpr::*;
        match name.as_str() {
            "C" => {
                let n = one(self)?;
                if n == 0 {
                    return Err(self.err("C(0) is not a group"));
                }
                Ok(Cyclic(n))
            }
            "D" => {
                let n = one(self)?;
                if n < 2 || n % 2 != 0 {
                    return Err(self.err("D(m) needs an even order m >= 2"));
                }
                Ok(Dihedral(n))
            }
            "Dic" => {
                let n = one(self)?;
                if n < 4 || n % 4 != 0 {
                    return Err(self.err("Dic(m) needs an order m divisible by 4"));
                }
                Ok(Dicyclic(n))
            }
            "S" => Ok(Symmetric(one(self)?.max(1))),
            "A" => Ok(Alternating(one(self)?.max(1))),
            "E" => match self.args()?.as_slice() {
                [p, k] => Ok(Elementary(*p, *k as u32)),
                _ => Err(self.err("E takes (p, k)")),
            },
            "SL23" | "M16" | "Q8" => {
                if has_args && !self.args()?.is_empty() {
                    return Err(self.err(&format!("{name} takes no arguments")));
                }
                Ok(match name.as_str() {
                    "SL23" => Sl23,
                    "M16" => M16,
                    _ => Q8,
                })
            }
            "SL" => match self.args()?.as_slice() {
                [2, 3] => Ok(Sl23),
                _ => Err(self.err("only SL(2,3) is supported")),
            },
            "perm" => {
                self.expect('[')?;
                let mut gens = Vec::new();
                if !self.eat(']') {
                    loop {
                        gens.push(self.generator()?);
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Perm(gens))
            }
            "table" => {
                self.ws();
                let mut it = serde_json::Deserializer::from_str(self.rest())
                    .into_iter::<serde_json::Value>();
                let v = it
                    .next()
                    .ok_or_else(|| self.err("expected JSON after 'table'"))?
                    .map_err(|e| self.err(&e.to_string()))?;
                let consumed = it.byte_offset();
                self.pos += consumed;
                let rows: Vec<Vec<i64>> = if v.is_object() {
                    serde_json::from_value::<GroupJson>(v)?.table
                } else {
                    serde_json::from_value(v)?
                };
                Ok(Table(rows))
            }
            _ => Err(self.err(&format!("unknown group name '{name}'"))),
        }
    }

    fn generator(&mut self) -> Result<Vec<Vec<u32>>> {
        let mut cycles = Vec::new();
        self.ws();
        if !self.rest().starts_with('(') {
            return Err(self.err("expected a cycle"));
        }
        while self.rest().starts_with('(') {
            self.pos += 1;
            let mut c = Vec::new();
            while !self.eat(')') {
                self.eat(',');
                let x = self.number()?;
                c.push(u32::try_from(x).map_err(|_| self.err("point out of range"))?);
            }
            if c.len() > 1 {
                cycles.push(c);
            }
            self.ws();
        }
        Ok(cycles)
    }
}

fn power_labels(sym: &str, n: usize) -> Vec<String> {
    (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => sym.to_string(),
            _ => format!("{sym}^{k}"),
        })
        .collect()
}

fn cyclic(n: usize) -> Result<Group> {
    let mut t = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            t[a * n + b] = ((a + b) % n) as u32;
        }
    }
    Ok(Group::from_flat_unchecked(n, t, Some(power_labels("a", n))))
}

/// `r^i s^j` has index `i + n j`, with `s r s = r⁻¹`.
fn dihedral(m: usize) -> Result<Group> {
    let n = m / 2;
    let mut t = vec![0u32; m * m];
    for x in 0..m {
        let (i, j) = (x % n, x / n);
        for y in 0..m {
            let (k, l) = (y % n, y / n);
            let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
            t[x * m + y] = (rot + n * ((j + l) % 2)) as u32;
        }
    }
    let labels = (0..m)
        .map(|x| {
            let (i, j) = (x % n, x / n);
            match (i, j) {
                (0, 0) => "e".into(),
                (1, 0) => "r".into(),
                (_, 0) => format!("r^{i}"),
                (0, _) => "s".into(),
                (1, _) => "rs".into(),
                _ => format!("r^{i}s"),
            }
        })
        .collect();
    Ok(Group::from_flat_unchecked(m, t, Some(labels)))
}

/// `a^i x^j` with `a^{2n} = 1`, `x² = a^n`, `x a x⁻¹ = a⁻¹`; index `i + 2n j`.
fn dicyclic(m: usize) -> Result<Group> {
    let n2 = m / 2;
    let n = n2 / 2;
    let mut t = vec![0u32; m * m];
    for x in 0..m {
        let (i, j) = (x % n2, x / n2);
        for y in 0..m {
            let (k, l) = (y % n2, y / n2);
            let v = match (j, l) {
                (0, _) => (i + k) % n2 + n2 * l,
                (1, 0) => (i + n2 - k) % n2 + n2,
                _ => (i + n2 - k + n) % n2,
            };
            t[x * m + y] = v as u32;
        }
    }
    let labels = (0..m)
        .map(|x| {
            let (i, j) = (x % n2, x / n2);
            match (i, j) {
                (0, 0) => "e".into(),
                (1, 0) => "a".into(),
                (_, 0) => format!("a^{i}"),
                (0, _) => "x".into(),
                (1, _) => "ax".into(),
                _ => format!("a^{i}x"),
            }
        })
        .collect();
    Ok(Group::from_flat_unchecked(m, t, Some(labels)))
}

fn symmetric(n: usize, caps: &Caps) -> Result<Group> {
    let gens: Vec<Vec<u32>> = match n {
        0 | 1 => vec![],
        2 => vec![vec![1, 0]],
        _ => {
            let cycle: Vec<u32> = (0..n as u32).map(|x| (x + 1) % n as u32).collect();
            let mut tr: Vec<u32> = (0..n as u32).collect();
            tr.swap(0, 1);
            vec![cycle, tr]
        }
    };
    Group::from_permutations(n.max(1), &gens, caps)
}

fn alternating(n: usize, caps: &Caps) -> Result<Group> {
    let gens: Vec<Vec<u32>> = (0..n.saturating_sub(2))
        .map(|i| {
            let mut p: Vec<u32> = (0..n as u32).collect();
            p[i] = i as u32 + 1;
            p[i + 1] = i as u32 + 2;
            p[i + 2] = i as u32;
            p
        })
        .collect();
    Group::from_permutations(n.max(1), &gens, caps)
}

/// SL(2,3) acting on the eight non-zero vectors of F_3².
fn sl23(caps: &Caps) -> Result<Group> {
    let vectors: Vec<(u32, u32)> = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .filter(|&v| v != (0, 0))
        .collect();
    let act = |m: [[u32; 2]; 2]| -> Vec<u32> {
        vectors
            .iter()
            .map(|&(x, y)| {
                let img = ((m[0][0] * x + m[0][1] * y) % 3, (m[1][0] * x + m[1][1] * y) % 3);
                vectors.iter().position(|&v| v == img).unwrap() as u32
            })
            .collect()
    };
    let gens = [act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])];
    Group::from_permutations(8, &gens, caps)
}

/// `a^i b^j` with `a^8 = b^2 = 1`, `b a b = a^5`; index `i + 8 j`.
fn m16() -> Group {
    let mut t = vec![0u32; 256];
    for x in 0..16 {
        let (i, j) = (x % 8, x / 8);
        for y in 0..16 {
            let (k, l) = (y % 8, y / 8);
            let twisted = if j == 1 { 5 * k } else { k };
            t[x * 16 + y] = ((i + twisted) % 8 + 8 * ((j + l) % 2)) as u32;
        }
    }
    let labels = (0..16)
        .map(|x| {
            let (i, j) = (x % 8, x / 8);
            match (i, j) {
                (0, 0) => "e".into(),
                (_, 0) => format!("a^{i}"),
                (0, _) => "b".into(),
                _ => format!("a^{i}b"),
            }
        })
        .collect();
    Group::from_flat_unchecked(16, t, Some(labels))
}
