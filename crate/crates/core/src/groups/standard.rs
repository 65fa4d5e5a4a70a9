//! Named families of finite groups with canonical element orderings.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ops::quotient;
use super::FiniteGroup;
use crate::error::{Error, Result};

/// Upper bound on the order of any standard group.
pub const MAX_STANDARD_ORDER: usize = 10_000;

/// A named group family. Serialized as `{"kind": "sl2", "p": 5}` and so on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupKind {
    Cyclic { n: usize },
    Symmetric { n: usize },
    Alternating { n: usize },
    /// Symmetries of the regular `n`-gon, order `2n`.
    Dihedral { n: usize },
    Quaternion,
    /// Upper unitriangular `n x n` matrices over F2.
    Unipotent { n: usize },
    Sl2 { p: usize },
    Psl2 { p: usize },
    DirectProduct { factors: Vec<GroupKind> },
}

impl GroupKind {
    pub fn order(&self) -> Option<usize> {
        let fact = |n: usize| (1..=n).try_fold(1usize, |a, k| a.checked_mul(k));
        match self {
            GroupKind::Cyclic { n } => Some(*n),
            GroupKind::Symmetric { n } => fact(*n),
            GroupKind::Alternating { n } => fact(*n).map(|f| if *n >= 2 { f / 2 } else { f }),
            GroupKind::Dihedral { n } => n.checked_mul(2),
            GroupKind::Quaternion => Some(8),
            GroupKind::Unipotent { n } => {
                let k = n * n.saturating_sub(1) / 2;
                (k < 63).then(|| 1usize << k)
            }
            GroupKind::Sl2 { p } => p.checked_mul(p * p - 1),
            GroupKind::Psl2 { p } => {
                let o = p.checked_mul(p * p - 1)?;
                Some(if *p == 2 { o } else { o / 2 })
            }
            GroupKind::DirectProduct { factors } => factors
                .iter()
                .try_fold(1usize, |acc, f| acc.checked_mul(f.order()?)),
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic { n } => write!(f, "Z{n}"),
            GroupKind::Symmetric { n } => write!(f, "S{n}"),
            GroupKind::Alternating { n } => write!(f, "A{n}"),
            GroupKind::Dihedral { n } => write!(f, "D{n}"),
            GroupKind::Quaternion => write!(f, "Q8"),
            GroupKind::Unipotent { n } => write!(f, "U{n}"),
            GroupKind::Sl2 { p } => write!(f, "SL2({p})"),
            GroupKind::Psl2 { p } => write!(f, "PSL2({p})"),
            GroupKind::DirectProduct { factors } => {
                let parts: Vec<String> = factors.iter().map(|k| k.to_string()).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

/// Parses shorthands such as `Z4`, `C4`, `S3`, `A5`, `D4`, `Q8`, `U3`,
/// `SL2(5)`, `PSL2(5)` and products `Z2xZ2`.
impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("unrecognized group shorthand '{s}'"));
        let parts: Vec<&str> = s.split(['x', '*']).collect();
        if parts.len() > 1 {
            let factors = parts
                .into_iter()
                .map(GroupKind::from_str)
                .collect::<Result<Vec<_>>>()?;
            return Ok(GroupKind::DirectProduct { factors });
        }
        let upper = s.to_ascii_uppercase();
        let paren = |prefix: &str| -> Option<usize> {
            upper
                .strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?
                .parse()
                .ok()
        };
        if let Some(p) = paren("PSL2") {
            return Ok(GroupKind::Psl2 { p });
        }
        if let Some(p) = paren("SL2") {
            return Ok(GroupKind::Sl2 { p });
        }
        if upper == "Q8" {
            return Ok(GroupKind::Quaternion);
        }
        let (head, tail) = upper.split_at(1);
        let n: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "Z" | "C" => Ok(GroupKind::Cyclic { n }),
            "S" => Ok(GroupKind::Symmetric { n }),
            "A" => Ok(GroupKind::Alternating { n }),
            "D" => Ok(GroupKind::Dihedral { n }),
            "U" => Ok(GroupKind::Unipotent { n }),
            _ => Err(bad()),
        }
    }
}

/// Builds a standard group with its canonical element ordering:
///
/// * cyclic: residues `0..n`;
/// * symmetric/alternating: permutations of `1..=n` in lexicographic order of
///   their one-line notation, composed right to left;
/// * dihedral: `r^k s^e` at index `k + n*e`;
/// * quaternion: `1, -1, i, -i, j, -j, k, -k`;
/// * unipotent: the above-diagonal entries read row by row form a binary number,
///   first entry most significant;
/// * sl2: determinant-one matrices `[[a,b],[c,d]]` in lexicographic order of
///   `(a, b, c, d)`;
/// * direct product: pairs `(x, y)` at index `x * |B| + y`.
pub fn standard_group(kind: &GroupKind) -> Result<FiniteGroup> {
    match kind.order() {
        Some(o) if (1..=MAX_STANDARD_ORDER).contains(&o) => {}
        _ => {
            return Err(Error::UnsupportedParameter(format!(
                "{kind} has order outside 1..={MAX_STANDARD_ORDER}"
            )))
        }
    }
    let label = kind.to_string();
    match kind {
        GroupKind::Cyclic { n } => cyclic(*n, label),
        GroupKind::Symmetric { n } => permutations(*n, false, label),
        GroupKind::Alternating { n } => permutations(*n, true, label),
        GroupKind::Dihedral { n } => dihedral(*n, label),
        GroupKind::Quaternion => quaternion(label),
        GroupKind::Unipotent { n } => unipotent(*n, label),
        GroupKind::Sl2 { p } => sl2(*p, label),
        GroupKind::Psl2 { p } => {
            let sl = sl2(*p, format!("SL2({p})"))?;
            let center = sl.center();
            let (g, _) = quotient(&sl, &center)?;
            Ok(g.relabeled(label))
        }
        GroupKind::DirectProduct { factors } => {
            let mut it = factors.iter();
            let first = it
                .next()
                .ok_or_else(|| Error::UnsupportedParameter("empty direct product".into()))?;
            let mut acc = standard_group(first)?;
            for f in it {
                acc = direct_product(&acc, &standard_group(f)?);
            }
            Ok(acc.relabeled(label))
        }
    }
}

/// `(Z/2)^n` as an iterated direct product: coordinate `i` is bit `n-1-i` of
/// the element index.
pub fn elementary_abelian_2(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return standard_group(&GroupKind::Cyclic { n: 1 });
    }
    standard_group(&GroupKind::DirectProduct {
        factors: vec![GroupKind::Cyclic { n: 2 }; n],
    })
}

pub(crate) fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        let (x1, x2) = (x / nb, x % nb);
        for y in 0..n {
            let (y1, y2) = (y / nb, y % nb);
            mul.push((a.mul(x1, y1) * nb + b.mul(x2, y2)) as u32);
        }
    }
    let names = (0..n)
        .map(|x| format!("({},{})", a.name(x / nb), b.name(x % nb)))
        .collect();
    FiniteGroup::from_flat(format!("{}x{}", a.label(), b.label()), n, mul, Some(names))
        .expect("direct product of groups is a group")
}

fn from_closure<T: Clone + Eq + std::hash::Hash>(
    label: String,
    elements: Vec<T>,
    op: impl Fn(&T, &T) -> T,
    name: impl Fn(&T) -> String,
) -> Result<FiniteGroup> {
    let index: HashMap<T, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let n = elements.len();
    let mut mul = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            let c = op(a, b);
            let i = index
                .get(&c)
                .ok_or_else(|| Error::Internal(format!("{label}: product left the element set")))?;
            mul.push(*i as u32);
        }
    }
    let names = elements.iter().map(name).collect();
    FiniteGroup::from_flat(label, n, mul, Some(names))
}

fn cyclic(n: usize, label: String) -> Result<FiniteGroup> {
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            mul.push(((a + b) % n) as u32);
        }
    }
    let names = (0..n).map(|k| k.to_string()).collect();
    FiniteGroup::from_flat(label, n, mul, Some(names))
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn is_even(p: &[u8]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Cycle notation on `1..=n`, `()` for the identity.
fn cycle_name(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut x = p[start] as usize;
        while x != start {
            seen[x] = true;
            cycle.push(x + 1);
            x = p[x] as usize;
        }
        let parts: Vec<String> = cycle.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("({})", parts.join(",")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

fn permutations(n: usize, even_only: bool, label: String) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnsupportedParameter("permutation degree must be positive".into()));
    }
    let mut p: Vec<u8> = (0..n as u8).collect();
    let mut all = Vec::new();
    loop {
        if !even_only || is_even(&p) {
            all.push(p.clone());
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    // (s t)(x) = s(t(x))
    from_closure(
        label,
        all,
        |s, t| t.iter().map(|&x| s[x as usize]).collect::<Vec<u8>>(),
        |p| cycle_name(p),
    )
}

fn dihedral(n: usize, label: String) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnsupportedParameter("dihedral parameter must be positive".into()));
    }
    let elems: Vec<(usize, usize)> = (0..2).flat_map(|e| (0..n).map(move |k| (k, e))).collect();
    from_closure(
        label,
        elems,
        |&(a, e), &(b, f)| {
            let k = if e == 0 { (a + b) % n } else { (a + n - b % n) % n };
            (k, (e + f) % 2)
        },
        |&(k, e)| match (k, e) {
            (0, 0) => "e".to_string(),
            (k, 0) => format!("r^{k}"),
            (0, _) => "s".to_string(),
            (k, _) => format!("r^{k}s"),
        },
    )
}

fn quaternion(label: String) -> Result<FiniteGroup> {
    // unit index: 0 = 1, 1 = i, 2 = j, 3 = k; product of units as (sign, unit)
    let unit_mul = |a: usize, b: usize| -> (bool, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (false, x),
            (x, y) if x == y => (true, 0),
            (1, 2) => (false, 3),
            (2, 1) => (true, 3),
            (2, 3) => (false, 1),
            (3, 2) => (true, 1),
            (3, 1) => (false, 2),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    };
    let elems: Vec<(usize, bool)> = (0..4).flat_map(|u| [(u, false), (u, true)]).collect();
    from_closure(
        label,
        elems,
        |&(a, sa), &(b, sb)| {
            let (s, u) = unit_mul(a, b);
            (u, s ^ sa ^ sb)
        },
        |&(u, s)| format!("{}{}", if s { "-" } else { "" }, ["1", "i", "j", "k"][u]),
    )
}

fn unipotent(n: usize, label: String) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnsupportedParameter("matrix size must be positive".into()));
    }
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let k = positions.len();
    let to_matrix = |idx: usize| -> Vec<u8> {
        let mut m = vec![0u8; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        for (p, &(i, j)) in positions.iter().enumerate() {
            if (idx >> (k - 1 - p)) & 1 == 1 {
                m[i * n + j] = 1;
            }
        }
        m
    };
    let elems: Vec<Vec<u8>> = (0..1usize << k).map(to_matrix).collect();
    let positions_for_name = positions.clone();
    from_closure(
        label,
        elems,
        |a, b| {
            let mut c = vec![0u8; n * n];
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0;
                    for l in 0..n {
                        s ^= a[i * n + l] & b[l * n + j];
                    }
                    c[i * n + j] = s;
                }
            }
            c
        },
        move |m| {
            let mut s = String::from("I");
            for &(i, j) in &positions_for_name {
                if m[i * n + j] == 1 {
                    s.push_str(&format!("+E{}{}", i + 1, j + 1));
                }
            }
            s
        },
    )
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn sl2(p: usize, label: String) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::UnsupportedParameter(format!("SL2 needs a prime field, got {p}")));
    }
    let mut elems = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - (b * c) % p) % p == 1 {
                        elems.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    from_closure(
        label,
        elems,
        |x, y| {
            [
                (x[0] * y[0] + x[1] * y[2]) % p,
                (x[0] * y[1] + x[1] * y[3]) % p,
                (x[2] * y[0] + x[3] * y[2]) % p,
                (x[2] * y[1] + x[3] * y[3]) % p,
            ]
        },
        |m| format!("[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3]),
    )
}
