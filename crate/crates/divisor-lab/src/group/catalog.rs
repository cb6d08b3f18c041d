//! Stock groups for tests, sweeps, and CLI use: cyclic, dihedral, symmetric,
//! alternating, the quaternion group, and direct products, all with canonical
//! element names. Every construction goes through the validating table
//! constructor.

use super::{ElementId, FiniteGroup, GroupError, CATALOG_ORDER_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogKind {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion8,
    DirectProduct(Box<CatalogKind>, Box<CatalogKind>),
}

impl CatalogKind {
    pub fn order(&self) -> usize {
        match self {
            CatalogKind::Cyclic(n) => *n,
            CatalogKind::Dihedral(n) => 2 * n,
            CatalogKind::Symmetric(n) => factorial(*n),
            CatalogKind::Alternating(n) => factorial(*n).div_ceil(2),
            CatalogKind::Quaternion8 => 8,
            CatalogKind::DirectProduct(a, b) => a.order() * b.order(),
        }
    }

    pub fn spec_string(&self) -> String {
        match self {
            CatalogKind::Cyclic(n) => format!("Z{n}"),
            CatalogKind::Dihedral(n) => format!("D{n}"),
            CatalogKind::Symmetric(n) => format!("S{n}"),
            CatalogKind::Alternating(n) => format!("A{n}"),
            CatalogKind::Quaternion8 => "Q8".to_string(),
            CatalogKind::DirectProduct(a, b) => {
                format!("{}x{}", a.spec_string(), b.spec_string())
            }
        }
    }
}

/// Parses compact specs like `S4`, `Z6`, `D4`, `Q8`, `A5`, or products such
/// as `Z2xZ2xZ3`. `Dn` is the dihedral group of order `2n`; `Cn` is accepted
/// as a synonym for `Zn`.
pub fn parse_spec(spec: &str) -> Result<CatalogKind, GroupError> {
    let atoms: Vec<&str> = spec.split(['x', 'X']).collect();
    let mut kinds = atoms.iter().map(|a| parse_atom(a.trim()));
    let first = kinds
        .next()
        .ok_or_else(|| GroupError::BadShape("empty catalog spec".into()))??;
    kinds.try_fold(first, |acc, k| {
        Ok(CatalogKind::DirectProduct(Box::new(acc), Box::new(k?)))
    })
}

fn parse_atom(atom: &str) -> Result<CatalogKind, GroupError> {
    let bad = || GroupError::BadShape(format!("unrecognized catalog atom {atom:?}"));
    if atom.eq_ignore_ascii_case("q8") {
        return Ok(CatalogKind::Quaternion8);
    }
    let mut chars = atom.chars();
    let head = chars.next().ok_or_else(bad)?;
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    match head.to_ascii_uppercase() {
        'Z' | 'C' => Ok(CatalogKind::Cyclic(n)),
        'D' => Ok(CatalogKind::Dihedral(n)),
        'S' => Ok(CatalogKind::Symmetric(n)),
        'A' => Ok(CatalogKind::Alternating(n)),
        _ => Err(bad()),
    }
}

/// Builds a catalog group. Permutation groups multiply "apply left factor
/// first": (p·q)(x) = q(p(x)).
pub fn build(kind: &CatalogKind) -> Result<FiniteGroup, GroupError> {
    let order = kind.order();
    if order > CATALOG_ORDER_CAP {
        return Err(GroupError::SizeCapExceeded {
            what: "catalog group",
            got: order,
            cap: CATALOG_ORDER_CAP,
        });
    }
    let label = kind.spec_string();
    match kind {
        CatalogKind::Cyclic(n) => cyclic(*n, &label),
        CatalogKind::Dihedral(n) => dihedral(*n, &label),
        CatalogKind::Symmetric(n) => permutation_group(*n, false, &label),
        CatalogKind::Alternating(n) => permutation_group(*n, true, &label),
        CatalogKind::Quaternion8 => quaternion(&label),
        CatalogKind::DirectProduct(a, b) => {
            let left = build(a)?;
            let right = build(b)?;
            direct_product(&left, &right, &label)
        }
    }
}

/// Componentwise product of two already-built groups.
pub fn direct_product(
    left: &FiniteGroup,
    right: &FiniteGroup,
    label: &str,
) -> Result<FiniteGroup, GroupError> {
    let (la, lb) = (left.order(), right.order());
    let order = la * lb;
    if order > CATALOG_ORDER_CAP {
        return Err(GroupError::SizeCapExceeded {
            what: "direct product",
            got: order,
            cap: CATALOG_ORDER_CAP,
        });
    }
    let id = |a: ElementId, b: ElementId| a * lb + b;
    let mut table = vec![vec![0; order]; order];
    for a1 in 0..la {
        for b1 in 0..lb {
            for a2 in 0..la {
                for b2 in 0..lb {
                    table[id(a1, b1)][id(a2, b2)] = id(left.mul(a1, a2), right.mul(b1, b2));
                }
            }
        }
    }
    let mut names = Vec::with_capacity(order);
    for a in 0..la {
        for b in 0..lb {
            names.push(format!("({},{})", left.name(a), right.name(b)));
        }
    }
    FiniteGroup::from_table_labeled(table, names, label)
}

fn cyclic(n: usize, label: &str) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::BadShape("cyclic group needs n >= 1".into()));
    }
    let table = (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect();
    let names = (0..n).map(|i| i.to_string()).collect();
    FiniteGroup::from_table_labeled(table, names, label)
}

fn dihedral(n: usize, label: &str) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::BadShape("dihedral group needs n >= 1".into()));
    }
    let order = 2 * n;
    // Element (i, j) = r^i s^j with s r = r^{-1} s; id = j*n + i.
    let id = |i: usize, j: usize| j * n + i;
    let mut table = vec![vec![0; order]; order];
    for i in 0..n {
        for j in 0..2 {
            for k in 0..n {
                for l in 0..2 {
                    let rot = if j == 0 {
                        (i + k) % n
                    } else {
                        (i + n - k % n) % n
                    };
                    table[id(i, j)][id(k, l)] = id(rot, (j + l) % 2);
                }
            }
        }
    }
    let mut names = vec![String::new(); order];
    for i in 0..n {
        for j in 0..2 {
            names[id(i, j)] = match (i, j) {
                (0, 0) => "1".to_string(),
                (1, 0) => "r".to_string(),
                (_, 0) => format!("r^{i}"),
                (0, _) => "s".to_string(),
                (1, _) => "r s".to_string(),
                (_, _) => format!("r^{i} s"),
            };
        }
    }
    FiniteGroup::from_table_labeled(table, names, label)
}

fn permutation_group(n: usize, even_only: bool, label: &str) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > 6 {
        return Err(GroupError::SizeCapExceeded {
            what: "permutation degree",
            got: n,
            cap: 6,
        });
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        if !even_only || permutation_is_even(&current) {
            perms.push(current.clone());
        }
        if !next_permutation(&mut current) {
            break;
        }
    }
    let index: std::collections::HashMap<Vec<usize>, ElementId> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let order = perms.len();
    let mut table = vec![vec![0; order]; order];
    for (a, p) in perms.iter().enumerate() {
        for (b, q) in perms.iter().enumerate() {
            // Apply left factor first: (p*q)(x) = q(p(x)).
            let composed: Vec<usize> = (0..n).map(|x| q[p[x]]).collect();
            table[a][b] = index[&composed];
        }
    }
    let names = perms.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::from_table_labeled(table, names, label)
}

fn quaternion(label: &str) -> Result<FiniteGroup, GroupError> {
    // id = axis*2 + (negative? 1 : 0), axis 0 = scalar, 1..3 = i, j, k.
    let mul = |a: usize, b: usize| -> usize {
        let (ax1, s1) = (a / 2, a % 2);
        let (ax2, s2) = (b / 2, b % 2);
        let (ax, extra_neg) = match (ax1, ax2) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            // Cyclic rule: i*j = k, j*k = i, k*i = j; reversed pairs negate.
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        };
        let sign = (s1 + s2 + usize::from(extra_neg)) % 2;
        ax * 2 + sign
    };
    let table = (0..8)
        .map(|a| (0..8).map(|b| mul(a, b)).collect())
        .collect();
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table_labeled(table, names, label)
}

fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

fn permutation_is_even(p: &[usize]) -> bool {
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

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Cycle notation on 1-based points: "()" for the identity, "(12)(34)" etc.
fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        loop {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
            if x == start {
                break;
            }
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// A fixed, deterministic family of catalog groups with order at most
/// `max_order`, used by the sweep suites and the explorer.
pub fn corpus(max_order: usize) -> Vec<FiniteGroup> {
    let mut kinds: Vec<CatalogKind> = Vec::new();
    for n in 1..=max_order {
        kinds.push(CatalogKind::Cyclic(n));
    }
    for n in 3..=max_order / 2 {
        kinds.push(CatalogKind::Dihedral(n));
    }
    for n in 3..=6 {
        kinds.push(CatalogKind::Symmetric(n));
    }
    for n in 4..=6 {
        kinds.push(CatalogKind::Alternating(n));
    }
    kinds.push(CatalogKind::Quaternion8);
    for spec in [
        "Z2xZ2", "Z2xZ4", "Z2xZ6", "Z2xZ8", "Z2xZ10", "Z2xZ12", "Z3xZ3", "Z3xZ6", "Z4xZ4",
        "Z2xZ2xZ2", "Z2xZ2xZ4", "Z2xZ2xZ6", "S3xZ2", "S3xZ3", "A4xZ2", "Q8xZ2",
    ] {
        kinds.push(parse_spec(spec).expect("fixed corpus spec"));
    }
    kinds
        .into_iter()
        .filter(|k| k.order() <= max_order)
        .map(|k| build(&k).expect("corpus group within caps"))
        .collect()
}
