//! Cayley-table finite groups and the subgroup-level primitives the rest of
//! the crate enumerates over: generated subgroups, centralizers, normalizers,
//! double cosets, the group/integer GCD, and the conjugate-power witness
//! search behind the Brauer lemma.

pub mod catalog;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Index of a group element; 0 is always the identity.
pub type ElementId = usize;

/// Largest order accepted by the catalog constructions.
pub const CATALOG_ORDER_CAP: usize = 720;
/// Largest order for which exhaustive subgroup enumeration is allowed.
pub const SUBGROUP_ENUM_CAP: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupAxiom {
    Closure,
    Associativity,
    Identity,
    Inverse,
}

impl fmt::Display for GroupAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupAxiom::Closure => "closure",
            GroupAxiom::Associativity => "associativity",
            GroupAxiom::Identity => "identity",
            GroupAxiom::Inverse => "inverse",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not a group: {reason} fails ({detail})")]
    NotAGroup { reason: GroupAxiom, detail: String },
    #[error("bad element names: {0}")]
    BadNames(String),
    #[error("bad table shape: {0}")]
    BadShape(String),
    #[error("size cap exceeded: {what} has order {got}, cap is {cap}")]
    SizeCapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("subgroup is not normal in the ambient group")]
    NotNormal,
    #[error("element {0} is not a member of the subgroup")]
    NotAMember(ElementId),
    #[error("element id {0} out of range for group of order {1}")]
    OutOfRange(ElementId, usize),
    #[error("operands belong to different groups")]
    GroupMismatch,
}

struct GroupData {
    order: usize,
    table: Vec<ElementId>,
    inv: Vec<ElementId>,
    names: Vec<String>,
    name_index: HashMap<String, ElementId>,
    label: String,
}

/// Immutable finite group, cheap to clone and share across workers.
#[derive(Clone)]
pub struct FiniteGroup {
    data: Arc<GroupData>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroup({}, order {})",
            self.data.label,
            self.order()
        )
    }
}

impl FiniteGroup {
    /// Builds a group from a full multiplication table, validating every
    /// axiom eagerly. The identity is moved to element id 0 if the table has
    /// it elsewhere.
    pub fn from_table(table: Vec<Vec<ElementId>>, names: Vec<String>) -> Result<Self, GroupError> {
        Self::from_table_labeled(table, names, "custom")
    }

    pub fn from_table_labeled(
        mut table: Vec<Vec<ElementId>>,
        mut names: Vec<String>,
        label: &str,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::BadShape("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(GroupError::BadShape("table is not square".into()));
        }
        if names.len() != n {
            return Err(GroupError::BadNames(format!(
                "{} names for {} elements",
                names.len(),
                n
            )));
        }
        {
            let mut seen = HashMap::new();
            for (i, name) in names.iter().enumerate() {
                if let Some(prev) = seen.insert(name.clone(), i) {
                    return Err(GroupError::BadNames(format!(
                        "duplicate name {name:?} at indices {prev} and {i}"
                    )));
                }
            }
        }
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::NotAGroup {
                        reason: GroupAxiom::Closure,
                        detail: format!("entry ({i},{j}) = {v} out of range"),
                    });
                }
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| GroupError::NotAGroup {
                reason: GroupAxiom::Identity,
                detail: "no two-sided identity".into(),
            })?;
        if identity != 0 {
            // Relabel by swapping ids 0 and `identity`.
            let swap = |x: ElementId| -> ElementId {
                if x == 0 {
                    identity
                } else if x == identity {
                    0
                } else {
                    x
                }
            };
            let mut new_table = vec![vec![0; n]; n];
            for (i, row) in new_table.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = swap(table[swap(i)][swap(j)]);
                }
            }
            table = new_table;
            names.swap(0, identity);
        }

        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAGroup {
                            reason: GroupAxiom::Associativity,
                            detail: format!("({a}*{b})*{c} != {a}*({b}*{c})"),
                        });
                    }
                }
            }
        }

        let mut inv = vec![0; n];
        for (x, slot) in inv.iter_mut().enumerate() {
            *slot = (0..n)
                .find(|&y| table[x][y] == 0 && table[y][x] == 0)
                .ok_or_else(|| GroupError::NotAGroup {
                    reason: GroupAxiom::Inverse,
                    detail: format!("element {x} has no two-sided inverse"),
                })?;
        }

        let flat: Vec<ElementId> = table.into_iter().flatten().collect();
        let name_index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(FiniteGroup {
            data: Arc::new(GroupData {
                order: n,
                table: flat,
                inv,
                names,
                name_index,
                label: label.to_string(),
            }),
        })
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    pub fn label(&self) -> &str {
        &self.data.label
    }

    pub fn identity(&self) -> ElementId {
        0
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.data.table[a * self.data.order + b]
    }

    #[inline]
    pub fn inv(&self, a: ElementId) -> ElementId {
        self.data.inv[a]
    }

    /// a^e for any integer exponent.
    pub fn pow(&self, a: ElementId, e: i64) -> ElementId {
        let (mut base, mut e) = if e < 0 {
            (self.inv(a), e.unsigned_abs())
        } else {
            (a, e as u64)
        };
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// b^{-1} a b
    #[inline]
    pub fn conjugate(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mul(self.mul(self.inv(b), a), b)
    }

    /// a^{-1} b^{-1} a b
    pub fn commutator(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.order()
    }

    pub fn element_order(&self, a: ElementId) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn name(&self, a: ElementId) -> &str {
        &self.data.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.data.names
    }

    pub fn element_by_name(&self, name: &str) -> Option<ElementId> {
        self.data.name_index.get(name).copied()
    }

    pub fn table_rows(&self) -> Vec<Vec<ElementId>> {
        (0..self.order())
            .map(|i| self.data.table[i * self.order()..(i + 1) * self.order()].to_vec())
            .collect()
    }

    /// Identity of the underlying storage (or structural equality as a
    /// fallback), used to validate that subgroups and words talk about the
    /// same group.
    pub fn same_group(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.order == other.data.order && self.data.table == other.data.table)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted_members(self.clone(), vec![0])
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted_members(self.clone(), self.elements().collect())
    }

    /// Smallest subgroup containing `gens` (closure fixpoint; empty input
    /// gives the trivial subgroup).
    pub fn subgroup_generated(&self, gens: &[ElementId]) -> Subgroup {
        let n = self.order();
        let mut mask = vec![false; n];
        mask[0] = true;
        let mut members = vec![0];
        let mut queue: Vec<ElementId> = Vec::new();
        for &g in gens {
            assert!(g < n, "generator out of range");
            if !mask[g] {
                mask[g] = true;
                members.push(g);
                queue.push(g);
            }
        }
        while let Some(x) = queue.pop() {
            for i in 0..members.len() {
                let m = members[i];
                for p in [self.mul(x, m), self.mul(m, x)] {
                    if !mask[p] {
                        mask[p] = true;
                        members.push(p);
                        queue.push(p);
                    }
                }
            }
        }
        members.sort_unstable();
        Subgroup::from_sorted_members(self.clone(), members)
    }

    /// {g : gs = sg for all s in S}.
    pub fn centralizer(&self, s: &[ElementId]) -> Subgroup {
        let members = self
            .elements()
            .filter(|&g| s.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect();
        Subgroup::from_sorted_members(self.clone(), members)
    }

    /// {g : g^{-1} A g = A} as sets; A need not be a subgroup.
    pub fn normalizer_of_subset(&self, a: &[ElementId]) -> Subgroup {
        let mut in_a = vec![false; self.order()];
        for &x in a {
            in_a[x] = true;
        }
        // Conjugation by g is a bijection, so inclusion implies equality.
        let members = self
            .elements()
            .filter(|&g| a.iter().all(|&x| in_a[self.conjugate(x, g)]))
            .collect();
        Subgroup::from_sorted_members(self.clone(), members)
    }

    /// Every subgroup, each exactly once: all cyclic subgroups first, then
    /// joins until the lattice closes. Capped at order 48.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        self.full_subgroup().all_subgroups()
    }
}

/// Sorted member set of a subgroup, holding a handle to its parent group.
#[derive(Clone)]
pub struct Subgroup {
    group: FiniteGroup,
    members: Vec<ElementId>,
    mask: Vec<bool>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {:?})", self.order(), self.group)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_group(&other.group) && self.members == other.members
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    /// Validating constructor: checks identity membership, closure, inverses,
    /// and Lagrange divisibility.
    pub fn from_members(
        group: FiniteGroup,
        mut members: Vec<ElementId>,
    ) -> Result<Self, GroupError> {
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            if m >= group.order() {
                return Err(GroupError::OutOfRange(m, group.order()));
            }
        }
        if members.first() != Some(&0) {
            return Err(GroupError::NotAGroup {
                reason: GroupAxiom::Identity,
                detail: "subgroup must contain the identity".into(),
            });
        }
        let mut mask = vec![false; group.order()];
        for &m in &members {
            mask[m] = true;
        }
        for &a in &members {
            if !mask[group.inv(a)] {
                return Err(GroupError::NotAGroup {
                    reason: GroupAxiom::Inverse,
                    detail: format!("inverse of {a} missing"),
                });
            }
            for &b in &members {
                if !mask[group.mul(a, b)] {
                    return Err(GroupError::NotAGroup {
                        reason: GroupAxiom::Closure,
                        detail: format!("product {a}*{b} escapes the member set"),
                    });
                }
            }
        }
        assert!(
            group.order().is_multiple_of(members.len()),
            "Lagrange violation: {} does not divide {}",
            members.len(),
            group.order()
        );
        Ok(Subgroup {
            group,
            members,
            mask,
        })
    }

    fn from_sorted_members(group: FiniteGroup, members: Vec<ElementId>) -> Self {
        let mut mask = vec![false; group.order()];
        for &m in &members {
            mask[m] = true;
        }
        let sub = Subgroup {
            group,
            members,
            mask,
        };
        debug_assert!(sub.validate_closure(), "internal subgroup not closed");
        debug_assert_eq!(sub.group.order() % sub.order(), 0);
        sub
    }

    fn validate_closure(&self) -> bool {
        self.mask[0]
            && self.members.iter().all(|&a| {
                self.mask[self.group.inv(a)]
                    && self
                        .members
                        .iter()
                        .all(|&b| self.mask[self.group.mul(a, b)])
            })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.mask[x]
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.group.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_normal(&self) -> bool {
        self.group.elements().all(|g| {
            self.members
                .iter()
                .all(|&u| self.mask[self.group.conjugate(u, g)])
        })
    }

    /// Intersection with another subgroup of the same parent.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        assert!(self.group.same_group(&other.group), "group mismatch");
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains(m))
            .collect();
        Subgroup::from_sorted_members(self.group.clone(), members)
    }

    /// The double coset H g H with its full member set; the size identity
    /// |HgH| * |H ∩ H^g| = |H|^2 is checked at construction.
    pub fn double_coset(&self, g: ElementId) -> DoubleCoset {
        assert!(g < self.group.order(), "representative out of range");
        let grp = &self.group;
        let mut mask = vec![false; grp.order()];
        let mut members = Vec::new();
        for &h1 in &self.members {
            let left = grp.mul(h1, g);
            for &h2 in &self.members {
                let x = grp.mul(left, h2);
                if !mask[x] {
                    mask[x] = true;
                    members.push(x);
                }
            }
        }
        members.sort_unstable();
        let conj_overlap = self
            .members
            .iter()
            .filter(|&&h| self.mask[grp.conjugate(h, g)])
            .count();
        assert_eq!(
            members.len() * conj_overlap,
            self.order() * self.order(),
            "double coset size identity violated"
        );
        DoubleCoset {
            subgroup: self.clone(),
            representative: g,
            members,
            mask,
        }
    }

    /// GCD of this subgroup and an integer: the LCM of orders of subgroups
    /// whose order divides `n`. The fast path uses gcd(|H|, n) (with
    /// GCD(H, 0) = |H|), which agrees with the enumeration oracle for finite
    /// groups.
    pub fn group_gcd(&self, n: u64) -> u64 {
        if n == 0 {
            self.order() as u64
        } else {
            gcd_u64(self.order() as u64, n)
        }
    }

    /// `group_gcd` for arbitrary-precision nonnegative `n`.
    pub fn group_gcd_big(&self, n: &BigInt) -> u64 {
        assert!(!n.is_negative(), "group_gcd expects a nonnegative bound");
        if n.is_zero() {
            return self.order() as u64;
        }
        BigInt::from(self.order())
            .gcd(n)
            .to_u64()
            .expect("gcd bounded by the group order")
    }

    /// Slow oracle: enumerates every subgroup and takes the LCM of the orders
    /// dividing `n`.
    pub fn group_gcd_oracle(&self, n: u64) -> Result<u64, GroupError> {
        let subs = self.all_subgroups()?;
        let mut acc: u64 = 1;
        for s in subs {
            let k = s.order() as u64;
            if n == 0 || n.is_multiple_of(k) {
                acc = acc.lcm(&k);
            }
        }
        Ok(acc)
    }

    /// All subgroups contained in this one (treating it as a group in its own
    /// right). Capped at order 48; layered closure over cyclic subgroups.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        if self.order() > SUBGROUP_ENUM_CAP {
            return Err(GroupError::SizeCapExceeded {
                what: "subgroup enumeration",
                got: self.order(),
                cap: SUBGROUP_ENUM_CAP,
            });
        }
        let grp = &self.group;
        let mut seen = std::collections::BTreeSet::<Vec<ElementId>>::new();
        let mut cyclics: Vec<Vec<ElementId>> = Vec::new();
        for &x in &self.members {
            let cyc = grp.subgroup_generated(&[x]);
            if seen.insert(cyc.members.clone()) {
                cyclics.push(cyc.members.clone());
            }
        }
        let mut frontier: Vec<Vec<ElementId>> = seen.iter().cloned().collect();
        while let Some(base) = frontier.pop() {
            for cyc in &cyclics {
                if cyc.iter().all(|m| base.binary_search(m).is_ok()) {
                    continue;
                }
                let mut gens = base.clone();
                gens.extend_from_slice(cyc);
                let join = grp.subgroup_generated(&gens);
                if join.order() > self.order() || !join.members.iter().all(|&m| self.mask[m]) {
                    continue;
                }
                if seen.insert(join.members.clone()) {
                    frontier.push(join.members.clone());
                }
            }
        }
        let mut out: Vec<Subgroup> = seen
            .into_iter()
            .map(|members| Subgroup::from_sorted_members(grp.clone(), members))
            .collect();
        out.sort_by_key(|s| (s.order(), s.members.clone()));
        Ok(out)
    }

    /// For `self = U` normal in its parent `V`, finds `w ∈ U` conjugating
    /// v^{|U|} to (vu)^{|U|}. Such a witness always exists; its absence is a
    /// hard failure rather than a recoverable error.
    pub fn brauer_witness(&self, v: ElementId, u: ElementId) -> Result<ElementId, GroupError> {
        if !self.contains(u) {
            return Err(GroupError::NotAMember(u));
        }
        if !self.is_normal() {
            return Err(GroupError::NotNormal);
        }
        let grp = &self.group;
        let e = self.order() as i64;
        let target = grp.pow(grp.mul(v, u), e);
        let base = grp.pow(v, e);
        let witness = self
            .members
            .iter()
            .copied()
            .find(|&w| grp.conjugate(base, w) == target);
        Ok(witness.expect("conjugating witness must exist in a finite normal subgroup"))
    }
}

/// A double coset H g H with its member set.
#[derive(Clone)]
pub struct DoubleCoset {
    subgroup: Subgroup,
    representative: ElementId,
    members: Vec<ElementId>,
    mask: Vec<bool>,
}

impl fmt::Debug for DoubleCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DoubleCoset(|H|={}, g={}, size {})",
            self.subgroup.order(),
            self.representative,
            self.members.len()
        )
    }
}

impl DoubleCoset {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn representative(&self) -> ElementId {
        self.representative
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a double coset always contains its representative
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.mask[x]
    }

    pub fn membership_mask(&self) -> &[bool] {
        &self.mask
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
