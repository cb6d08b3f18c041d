//! Equations over finite rings with solutions constrained to an embedded
//! unit subgroup: homogeneity matrices and moduli, solution counting, the
//! divisibility verdict, power-sum representation bounds, and the monoid
//! substitution identity used to justify the twist step.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::group::{ElementId, FiniteGroup, GroupError, Subgroup};
use crate::intlinalg::solve_integer;
use crate::report::{BoundCheck, Breakdown, DivisibilityReport};
use crate::solver::SolveOptions;
use crate::words::{GeneralizedSystem, Letter, Word};
use crate::{Int, IntMatrix};

/// Ceiling on full ring-element enumeration (unit-group discovery).
pub const RING_ENUM_CAP: u128 = 1 << 20;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("search space of {space} assignments exceeds the cap of {cap}")]
    SearchSpaceTooLarge { space: u128, cap: u64 },
    #[error("{what} would enumerate {got} ring elements, cap is {cap}")]
    EnumerationTooLarge {
        what: &'static str,
        got: u128,
        cap: u128,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("bad unit-subgroup embedding: {0}")]
    BadEmbedding(String),
    #[error("bad ring element: {0}")]
    BadElement(String),
    #[error("bad term: {0}")]
    BadTerm(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Canonical element of a finite ring backend: a coordinate vector over
/// Z/kZ, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem(Vec<u64>);

impl RingElem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Debug, Clone)]
enum RingKind {
    /// Z/kZ.
    ModInt,
    /// d x d matrices over Z/kZ, row-major coordinates.
    MatrixRing { dim: usize },
    /// (Z/kZ)[G], coordinates indexed by group element id.
    GroupRing { group: FiniteGroup },
}

/// A finite associative ring with unity.
#[derive(Debug, Clone)]
pub struct FiniteRing {
    modulus: u64,
    kind: RingKind,
}

impl FiniteRing {
    pub fn modint(k: u64) -> Result<Self, RingError> {
        Self::check_modulus(k)?;
        Ok(FiniteRing {
            modulus: k,
            kind: RingKind::ModInt,
        })
    }

    pub fn matrix_ring(k: u64, dim: usize) -> Result<Self, RingError> {
        Self::check_modulus(k)?;
        if dim == 0 || dim > 6 {
            return Err(RingError::BadElement(format!(
                "matrix dimension {dim} out of range 1..=6"
            )));
        }
        Ok(FiniteRing {
            modulus: k,
            kind: RingKind::MatrixRing { dim },
        })
    }

    pub fn group_ring(k: u64, group: FiniteGroup) -> Result<Self, RingError> {
        Self::check_modulus(k)?;
        Ok(FiniteRing {
            modulus: k,
            kind: RingKind::GroupRing { group },
        })
    }

    fn check_modulus(k: u64) -> Result<(), RingError> {
        if k == 0 {
            return Err(RingError::BadElement("modulus must be positive".into()));
        }
        // Coordinate arithmetic accumulates sums of products below 2^62 when
        // k stays below 2^31; larger moduli would silently wrap.
        if k > (1 << 31) {
            return Err(RingError::BadElement(format!(
                "modulus {k} exceeds the supported 2^31 ceiling"
            )));
        }
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Rank of the ring as a free Z/kZ-module.
    pub fn dimension(&self) -> usize {
        match &self.kind {
            RingKind::ModInt => 1,
            RingKind::MatrixRing { dim } => dim * dim,
            RingKind::GroupRing { group } => group.order(),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            RingKind::ModInt => format!("Z/{}Z", self.modulus),
            RingKind::MatrixRing { dim } => format!("M_{}(Z/{}Z)", dim, self.modulus),
            RingKind::GroupRing { group } => {
                format!("(Z/{}Z)[{}]", self.modulus, group.label())
            }
        }
    }

    pub fn zero(&self) -> RingElem {
        RingElem(vec![0; self.dimension()])
    }

    pub fn one(&self) -> RingElem {
        let mut coords = vec![0; self.dimension()];
        match &self.kind {
            RingKind::ModInt => coords[0] = 1 % self.modulus,
            RingKind::MatrixRing { dim } => {
                for i in 0..*dim {
                    coords[i * dim + i] = 1 % self.modulus;
                }
            }
            RingKind::GroupRing { .. } => coords[0] = 1 % self.modulus,
        }
        RingElem(coords)
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<RingElem, RingError> {
        if coords.len() != self.dimension() {
            return Err(RingError::BadElement(format!(
                "expected {} coordinates, got {}",
                self.dimension(),
                coords.len()
            )));
        }
        Ok(RingElem(
            coords.into_iter().map(|c| c % self.modulus).collect(),
        ))
    }

    /// Scalar integer (possibly negative) as a ring element: n * 1.
    pub fn from_integer(&self, n: i64) -> RingElem {
        let k = self.modulus as i64;
        let r = ((n % k) + k) % k;
        let mut e = self.one();
        for c in &mut e.0 {
            *c = (*c * r as u64) % self.modulus;
        }
        e
    }

    /// Basis element of a group ring: the group element itself.
    pub fn group_basis(&self, id: ElementId) -> Result<RingElem, RingError> {
        let RingKind::GroupRing { group } = &self.kind else {
            return Err(RingError::BadElement(
                "group basis element requested from a non group-ring".into(),
            ));
        };
        if id >= group.order() {
            return Err(RingError::BadElement(format!(
                "element id {id} out of range"
            )));
        }
        let mut coords = vec![0; self.dimension()];
        coords[id] = 1 % self.modulus;
        Ok(RingElem(coords))
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + y) % self.modulus)
                .collect(),
        )
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        RingElem(
            a.0.iter()
                .map(|x| (self.modulus - x % self.modulus) % self.modulus)
                .collect(),
        )
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let k = self.modulus;
        match &self.kind {
            RingKind::ModInt => RingElem(vec![(a.0[0] * b.0[0]) % k]),
            RingKind::MatrixRing { dim } => {
                let d = *dim;
                let mut out = vec![0u64; d * d];
                for i in 0..d {
                    for l in 0..d {
                        let x = a.0[i * d + l];
                        if x == 0 {
                            continue;
                        }
                        for j in 0..d {
                            out[i * d + j] = (out[i * d + j] + x * b.0[l * d + j]) % k;
                        }
                    }
                }
                RingElem(out)
            }
            RingKind::GroupRing { group } => {
                let mut out = vec![0u64; group.order()];
                for (i, &x) in a.0.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.0.iter().enumerate() {
                        if y == 0 {
                            continue;
                        }
                        let g = group.mul(i, j);
                        out[g] = (out[g] + x * y) % k;
                    }
                }
                RingElem(out)
            }
        }
    }

    pub fn pow(&self, a: &RingElem, e: u64) -> RingElem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    /// Two-sided inverse, if one exists. Left multiplication is a Z/kZ-linear
    /// map; a preimage of 1 is found by solving the lifted integer system.
    pub fn try_inverse(&self, a: &RingElem) -> Option<RingElem> {
        let dim = self.dimension();
        let k = Int::from(self.modulus);
        // Columns: the images a * basis_j, then k * identity.
        let mut images = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut basis = vec![0u64; dim];
            basis[j] = 1 % self.modulus;
            images.push(self.mul(a, &RingElem(basis)));
        }
        let mut data: Vec<Int> = Vec::with_capacity(dim * 2 * dim);
        for i in 0..dim {
            for image in &images {
                data.push(Int::from(image.0[i]));
            }
            for j in 0..dim {
                data.push(if i == j { k.clone() } else { Int::zero() });
            }
        }
        let system = IntMatrix::new(dim, 2 * dim, data);
        let one = self.one();
        let rhs: Vec<Int> = one.0.iter().map(|&c| Int::from(c)).collect();
        let solution = solve_integer(&system, &rhs)?;
        let coords: Vec<u64> = solution[..dim]
            .iter()
            .map(|x| {
                let r = x.mod_floor(&k);
                u64::try_from(r).expect("reduced residue fits u64")
            })
            .collect();
        let candidate = RingElem(coords);
        // The solve gives a right inverse of left multiplication; insist on a
        // genuine two-sided inverse.
        (self.mul(a, &candidate) == one && self.mul(&candidate, a) == one).then_some(candidate)
    }

    /// All ring elements, odometer order. Errors when k^dim exceeds the cap.
    pub fn all_elements(&self) -> Result<Vec<RingElem>, RingError> {
        let dim = self.dimension();
        let total = (self.modulus as u128)
            .checked_pow(dim as u32)
            .unwrap_or(u128::MAX);
        if total > RING_ENUM_CAP {
            return Err(RingError::EnumerationTooLarge {
                what: "ring element enumeration",
                got: total,
                cap: RING_ENUM_CAP,
            });
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut coords = vec![0u64; dim];
        loop {
            out.push(RingElem(coords.clone()));
            let mut i = dim;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                coords[i] += 1;
                if coords[i] < self.modulus {
                    break;
                }
                coords[i] = 0;
            }
        }
    }

    pub fn format_elem(&self, a: &RingElem) -> String {
        match &self.kind {
            RingKind::ModInt => a.0[0].to_string(),
            RingKind::MatrixRing { dim } => {
                let mut s = String::from("[");
                for i in 0..*dim {
                    if i > 0 {
                        s.push(';');
                    }
                    for j in 0..*dim {
                        if j > 0 {
                            s.push(',');
                        }
                        let _ = write!(s, "{}", a.0[i * dim + j]);
                    }
                }
                s.push(']');
                s
            }
            RingKind::GroupRing { group } => {
                let terms: Vec<String> =
                    a.0.iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| format!("{c}*{}", group.name(i)))
                        .collect();
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                }
            }
        }
    }
}

/// Enumerates the full unit group of a small ring as a Cayley-table group
/// together with the id -> element embedding. The identity element gets id 0.
pub fn unit_group(ring: &FiniteRing) -> Result<(FiniteGroup, Vec<RingElem>), RingError> {
    let one = ring.one();
    let mut units: Vec<RingElem> = vec![one.clone()];
    for e in ring.all_elements()? {
        if e != one && ring.try_inverse(&e).is_some() {
            units.push(e);
        }
    }
    let index: std::collections::HashMap<&RingElem, usize> =
        units.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let table: Vec<Vec<usize>> = units
        .iter()
        .map(|a| {
            units
                .iter()
                .map(|b| {
                    let p = ring.mul(a, b);
                    *index.get(&p).expect("unit group closed under products")
                })
                .collect()
        })
        .collect();
    let names = units.iter().map(|e| ring.format_elem(e)).collect();
    let group = FiniteGroup::from_table_labeled(table, names, &format!("{}^*", ring.describe()))?;
    Ok((group, units))
}

/// One factor of a monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingFactor {
    Scalar(RingElem),
    /// 1-based variable index with an integer exponent.
    VarPow {
        var: usize,
        exp: i64,
    },
}

/// A monomial: an ordered product of scalar factors and variable powers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RingTerm {
    pub factors: Vec<RingFactor>,
}

impl RingTerm {
    pub fn scalar(c: RingElem) -> Self {
        RingTerm {
            factors: vec![RingFactor::Scalar(c)],
        }
    }

    /// Net exponent of variable `j` (1-based).
    pub fn exponent_sum(&self, j: usize) -> i64 {
        self.factors
            .iter()
            .map(|f| match f {
                RingFactor::VarPow { var, exp } if *var == j => *exp,
                _ => 0,
            })
            .sum()
    }

    /// Scalar coefficients appearing in this term.
    fn scalars(&self) -> impl Iterator<Item = &RingElem> {
        self.factors.iter().filter_map(|f| match f {
            RingFactor::Scalar(c) => Some(c),
            _ => None,
        })
    }

    /// Monomial from a group word: variables become variable powers and
    /// coefficient letters become scalar group-ring basis elements.
    pub fn from_word(word: &Word, ring: &FiniteRing) -> Result<Self, RingError> {
        let mut factors = Vec::new();
        for letter in word.letters() {
            match letter {
                Letter::Var { index, inverse } => factors.push(RingFactor::VarPow {
                    var: *index,
                    exp: if *inverse { -1 } else { 1 },
                }),
                Letter::Coeff(c) => factors.push(RingFactor::Scalar(ring.group_basis(*c)?)),
            }
        }
        Ok(RingTerm { factors })
    }
}

/// A system "sum of terms = 0" per equation, with solutions drawn from an
/// embedded unit subgroup G ⊆ R^*. The subgroup is always supplied as a
/// Cayley-table group plus an explicit id -> unit embedding, never
/// rediscovered from the ring.
#[derive(Debug, Clone)]
pub struct RingEquationSystem {
    ring: FiniteRing,
    arity: usize,
    equations: Vec<Vec<RingTerm>>,
    units: FiniteGroup,
    embedding: Vec<RingElem>,
}

impl RingEquationSystem {
    pub fn new(
        ring: FiniteRing,
        arity: usize,
        equations: Vec<Vec<RingTerm>>,
        units: FiniteGroup,
        embedding: Vec<RingElem>,
    ) -> Result<Self, RingError> {
        if arity == 0 {
            return Err(RingError::BadTerm(
                "a system needs at least one unknown".into(),
            ));
        }
        if embedding.len() != units.order() {
            return Err(RingError::BadEmbedding(format!(
                "{} images for a group of order {}",
                embedding.len(),
                units.order()
            )));
        }
        for e in &embedding {
            if e.0.len() != ring.dimension() {
                return Err(RingError::BadEmbedding("image has wrong dimension".into()));
            }
            if e.0.iter().any(|&c| c >= ring.modulus()) {
                return Err(RingError::BadEmbedding(
                    "image has unreduced coordinates".into(),
                ));
            }
        }
        if embedding[0] != ring.one() {
            return Err(RingError::BadEmbedding("identity must map to 1".into()));
        }
        {
            let distinct: BTreeSet<&RingElem> = embedding.iter().collect();
            if distinct.len() != embedding.len() {
                return Err(RingError::BadEmbedding("embedding is not injective".into()));
            }
        }
        for a in units.elements() {
            for b in units.elements() {
                let lhs = ring.mul(&embedding[a], &embedding[b]);
                if lhs != embedding[units.mul(a, b)] {
                    return Err(RingError::BadEmbedding(format!(
                        "images of {} and {} do not multiply homomorphically",
                        units.name(a),
                        units.name(b)
                    )));
                }
            }
        }
        // Homomorphic + identity: every image is invertible, with inverse the
        // image of the group inverse.
        for eq in &equations {
            for term in eq {
                for f in &term.factors {
                    match f {
                        RingFactor::VarPow { var, .. } if *var == 0 || *var > arity => {
                            return Err(RingError::BadTerm(format!(
                                "variable index {var} out of range 1..={arity}"
                            )));
                        }
                        RingFactor::Scalar(c) if c.0.len() != ring.dimension() => {
                            return Err(RingError::BadTerm("scalar has wrong dimension".into()));
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(RingEquationSystem {
            ring,
            arity,
            equations,
            units,
            embedding,
        })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn equations(&self) -> &[Vec<RingTerm>] {
        &self.equations
    }

    pub fn units(&self) -> &FiniteGroup {
        &self.units
    }

    pub fn embedding(&self) -> &[RingElem] {
        &self.embedding
    }

    /// One row per monomial: exponent sums of the m unknowns, then an
    /// indicator column per equation (constant monomials still contribute
    /// all-zero exponent rows).
    pub fn homogeneity_matrix(&self) -> IntMatrix {
        let m = self.arity;
        let s = self.equations.len();
        let mut data: Vec<Int> = Vec::new();
        let mut row_count = 0;
        for (p, eq) in self.equations.iter().enumerate() {
            for term in eq {
                for j in 1..=m {
                    data.push(Int::from(term.exponent_sum(j)));
                }
                for q in 0..s {
                    data.push(Int::from(u64::from(q == p)));
                }
                row_count += 1;
            }
        }
        IntMatrix::new(row_count, m + s, data)
    }

    /// The largest n for which the system is generalized homogeneous modulo
    /// n (0 when every n works): the (m+s)-th invariant factor of the
    /// homogeneity matrix.
    pub fn homogeneity_modulus(&self) -> Int {
        let m = self.arity;
        let s = self.equations.len();
        self.homogeneity_matrix().invariant_factor(m + s)
    }

    /// Distinct scalar coefficients across the system.
    pub fn coefficient_set(&self) -> Vec<RingElem> {
        let set: BTreeSet<RingElem> = self
            .equations
            .iter()
            .flatten()
            .flat_map(|t| t.scalars().cloned())
            .collect();
        set.into_iter().collect()
    }

    fn evaluate_term(&self, term: &RingTerm, assignment: &[ElementId]) -> RingElem {
        let mut acc = self.ring.one();
        for f in &term.factors {
            match f {
                RingFactor::Scalar(c) => acc = self.ring.mul(&acc, c),
                RingFactor::VarPow { var, exp } => {
                    // The image of a power is the power of the image, and
                    // negative exponents go through the group inverse.
                    let powered = self.units.pow(assignment[var - 1], *exp);
                    acc = self.ring.mul(&acc, &self.embedding[powered]);
                }
            }
        }
        acc
    }

    pub fn is_solution(&self, assignment: &[ElementId]) -> bool {
        self.equations.iter().all(|eq| {
            let mut sum = self.ring.zero();
            for term in eq {
                sum = self.ring.add(&sum, &self.evaluate_term(term, assignment));
            }
            self.ring.is_zero(&sum)
        })
    }

    /// Exact count of unit-subgroup tuples solving every equation.
    pub fn count_solutions(&self, cap: u64) -> Result<u64, RingError> {
        let space = (self.units.order() as u128).pow(self.arity as u32);
        if space > cap as u128 {
            return Err(RingError::SearchSpaceTooLarge { space, cap });
        }
        let n = self.units.order();
        let mut tuple = vec![0usize; self.arity];
        let mut count = 0;
        loop {
            if self.is_solution(&tuple) {
                count += 1;
            }
            let mut i = self.arity;
            loop {
                if i == 0 {
                    return Ok(count);
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] < n {
                    break;
                }
                tuple[i] = 0;
            }
        }
    }

    /// G_0 = elements of the unit subgroup commuting (in the ring) with every
    /// scalar coefficient of the system.
    pub fn coefficient_centralizer(&self) -> Subgroup {
        let coeffs = self.coefficient_set();
        let members: Vec<ElementId> = self
            .units
            .elements()
            .filter(|&g| {
                let img = &self.embedding[g];
                coeffs
                    .iter()
                    .all(|c| self.ring.mul(img, c) == self.ring.mul(c, img))
            })
            .collect();
        Subgroup::from_members(self.units.clone(), members)
            .expect("centralizer condition yields a subgroup")
    }
}

/// Divisibility verdict for a ring system: the count of solutions in G^m is
/// a multiple of GCD(G_0, homogeneity modulus).
pub fn homogeneity_verdict(
    sys: &RingEquationSystem,
    opts: &SolveOptions,
) -> Result<DivisibilityReport, RingError> {
    let matrix = sys.homogeneity_matrix();
    let top = sys.arity() + sys.equations().len();
    let delta_upper = matrix.minors_gcd(top);
    let delta_lower = matrix.minors_gcd(top - 1);
    let modulus = matrix.invariant_factor(top);
    let g0 = sys.coefficient_centralizer();
    let bound = opts.group_gcd(&g0, &modulus)?;
    let count = sys.count_solutions(opts.cap)?;
    let breakdown = Breakdown {
        unit_centralizer_order: Some(g0.order() as u64),
        note: Some(
            "coefficients are centralized inside the ring, then intersected with the unit \
             subgroup"
                .into(),
        ),
        ..Breakdown::default()
    }
    .with_matrix(&matrix)
    .with_deltas(&delta_upper, &delta_lower, &modulus);
    Ok(DivisibilityReport::new(
        "GCD(unit centralizer of coefficients, homogeneity modulus)",
        count,
        bound,
        breakdown,
    ))
}

/// Builds the ring equation Σ_i ρ(u_i(x_1..x_m))^{l_i} = 1 over the given
/// embedded unit subgroup and checks every applicable case bound:
/// GCD(G, GCD{l_i}) always, GCD(G, LCM{l_i}) when the number of summands k
/// is at most m, and |G| when k < m.
pub fn power_sum_verdict(
    ring: &FiniteRing,
    units: &FiniteGroup,
    embedding: &[RingElem],
    words: &[Word],
    exponents: &[i64],
    opts: &SolveOptions,
) -> Result<DivisibilityReport, RingError> {
    if words.is_empty() || words.len() != exponents.len() {
        return Err(RingError::BadTerm(
            "need matching nonempty word and exponent lists".into(),
        ));
    }
    let m = words[0].arity();
    if words
        .iter()
        .any(|w| w.arity() != m || !w.is_coefficient_free())
    {
        return Err(RingError::BadTerm(
            "summand words must be coefficient-free and share an arity".into(),
        ));
    }
    let k = words.len();
    let mut terms: Vec<RingTerm> = Vec::new();
    for (word, &l) in words.iter().zip(exponents) {
        let base: Vec<RingFactor> = word
            .letters()
            .iter()
            .map(|letter| match letter {
                Letter::Var { index, inverse } => RingFactor::VarPow {
                    var: *index,
                    exp: if *inverse { -1 } else { 1 },
                },
                Letter::Coeff(_) => unreachable!("coefficient-free word"),
            })
            .collect();
        let block: Vec<RingFactor> = if l >= 0 {
            base
        } else {
            base.iter()
                .rev()
                .map(|f| match f {
                    RingFactor::VarPow { var, exp } => RingFactor::VarPow {
                        var: *var,
                        exp: -exp,
                    },
                    RingFactor::Scalar(_) => unreachable!(),
                })
                .collect()
        };
        let reps = l.unsigned_abs() as usize;
        let mut factors = Vec::with_capacity(block.len() * reps);
        for _ in 0..reps {
            factors.extend_from_slice(&block);
        }
        terms.push(RingTerm { factors });
    }
    terms.push(RingTerm::scalar(ring.from_integer(-1)));

    let sys = RingEquationSystem::new(
        ring.clone(),
        m,
        vec![terms],
        units.clone(),
        embedding.to_vec(),
    )?;
    let count = sys.count_solutions(opts.cap)?;

    let full = units.full_subgroup();
    let exp_gcd = exponents
        .iter()
        .fold(Int::zero(), |acc, &l| acc.gcd(&Int::from(l)));
    let exp_lcm = exponents
        .iter()
        .fold(Int::from(1), |acc, &l| acc.lcm(&Int::from(l)));
    let mut checks = vec![BoundCheck {
        label: "GCD(G, GCD of exponents)".into(),
        bound: opts.group_gcd(&full, &exp_gcd.abs())?,
        divides: false,
    }];
    if k <= m {
        checks.push(BoundCheck {
            label: "GCD(G, LCM of exponents)".into(),
            bound: opts.group_gcd(&full, &exp_lcm.abs())?,
            divides: false,
        });
    }
    if k < m {
        checks.push(BoundCheck {
            label: "|G|".into(),
            bound: units.order() as u64,
            divides: false,
        });
    }
    for c in &mut checks {
        c.divides = count % c.bound == 0;
    }
    let strongest = checks.last().expect("at least one bound").clone();
    let all_divide = checks.iter().all(|c| c.divides);
    let mut report = DivisibilityReport::new(
        strongest.label.clone(),
        count,
        strongest.bound,
        Breakdown {
            bound_checks: checks,
            note: Some(format!("{k} summands in {m} unknowns")),
            ..Breakdown::default()
        },
    );
    report.divides = all_divide;
    Ok(report)
}

/// Rewrites a plain group system {w_i = 1} as ring equations {w_i - 1 = 0}
/// over the group ring (Z/kZ)\[G\], with G embedded as the basis.
pub fn ring_system_from_plain(
    sys: &GeneralizedSystem,
    k: u64,
) -> Result<RingEquationSystem, RingError> {
    if !sys.is_plain() {
        return Err(RingError::BadTerm("expected a plain system".into()));
    }
    let group = sys.group().clone();
    let ring = FiniteRing::group_ring(k, group.clone())?;
    let embedding: Vec<RingElem> = group
        .elements()
        .map(|g| ring.group_basis(g).expect("basis element"))
        .collect();
    let equations = sys
        .equations()
        .iter()
        .map(|eq| {
            Ok(vec![
                RingTerm::from_word(&eq.word, &ring)?,
                RingTerm::scalar(ring.from_integer(-1)),
            ])
        })
        .collect::<Result<Vec<_>, RingError>>()?;
    RingEquationSystem::new(ring, sys.arity(), equations, group, embedding)
}

/// A multiplicative monoid to run the substitution identity in: either a
/// finite group or a finite ring.
#[derive(Debug, Clone, Copy)]
pub enum MonoidRef<'a> {
    Group(&'a FiniteGroup),
    Ring(&'a FiniteRing),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoidElem {
    Group(ElementId),
    Ring(RingElem),
}

impl<'a> MonoidRef<'a> {
    pub fn one(&self) -> MonoidElem {
        match self {
            MonoidRef::Group(_) => MonoidElem::Group(0),
            MonoidRef::Ring(r) => MonoidElem::Ring(r.one()),
        }
    }

    pub fn mul(&self, a: &MonoidElem, b: &MonoidElem) -> MonoidElem {
        match (self, a, b) {
            (MonoidRef::Group(g), MonoidElem::Group(x), MonoidElem::Group(y)) => {
                MonoidElem::Group(g.mul(*x, *y))
            }
            (MonoidRef::Ring(r), MonoidElem::Ring(x), MonoidElem::Ring(y)) => {
                MonoidElem::Ring(r.mul(x, y))
            }
            _ => panic!("monoid element from the wrong carrier"),
        }
    }

    pub fn try_inverse(&self, a: &MonoidElem) -> Option<MonoidElem> {
        match (self, a) {
            (MonoidRef::Group(g), MonoidElem::Group(x)) => Some(MonoidElem::Group(g.inv(*x))),
            (MonoidRef::Ring(r), MonoidElem::Ring(x)) => r.try_inverse(x).map(MonoidElem::Ring),
            _ => panic!("monoid element from the wrong carrier"),
        }
    }

    fn pow_signed(&self, a: &MonoidElem, a_inv: &MonoidElem, e: i64) -> MonoidElem {
        let (base, n) = if e < 0 {
            (a_inv, e.unsigned_abs())
        } else {
            (a, e as u64)
        };
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, base);
        }
        acc
    }
}

/// Outcome of [`substitution_identity_check`].
#[derive(Debug, Clone)]
pub struct SubstitutionIdentity {
    pub exponent_total: i64,
    pub holds: bool,
}

/// For u(t) = b_0 t^{m_1} b_1 ... t^{m_l} b_l in a monoid where a and h are
/// invertible and every a^{-s} h a^s commutes with every b_i, checks the
/// closed form of u(ah) against u(a): a prefix of conjugates of h (or of
/// h^{-1}) times u(a), with an empty prefix when the exponents sum to zero.
pub fn substitution_identity_check(
    monoid: MonoidRef<'_>,
    b: &[MonoidElem],
    a: &MonoidElem,
    h: &MonoidElem,
    exponents: &[i64],
) -> Result<SubstitutionIdentity, RingError> {
    if b.len() != exponents.len() + 1 {
        return Err(RingError::PreconditionViolated(format!(
            "need {} interleaved constants for {} exponents",
            exponents.len() + 1,
            exponents.len()
        )));
    }
    let a_inv = monoid
        .try_inverse(a)
        .ok_or_else(|| RingError::PreconditionViolated("a is not invertible".into()))?;
    let h_inv = monoid
        .try_inverse(h)
        .ok_or_else(|| RingError::PreconditionViolated("h is not invertible".into()))?;

    // a has finite order; collect every conjugate a^{-s} h a^{s}.
    let mut conjugates = Vec::new();
    {
        let mut left = monoid.one(); // a^{-s}
        let mut right = monoid.one(); // a^{s}
        loop {
            conjugates.push(monoid.mul(&monoid.mul(&left, h), &right));
            left = monoid.mul(&left, &a_inv);
            right = monoid.mul(a, &right);
            if right == monoid.one() {
                break;
            }
            if conjugates.len() > 1_000_000 {
                return Err(RingError::PreconditionViolated(
                    "element a does not have a small finite order".into(),
                ));
            }
        }
    }
    for c in &conjugates {
        for bi in b {
            if monoid.mul(c, bi) != monoid.mul(bi, c) {
                return Err(RingError::PreconditionViolated(
                    "a conjugate of h fails to commute with a constant".into(),
                ));
            }
        }
    }

    let eval = |t: &MonoidElem, t_inv: &MonoidElem| -> MonoidElem {
        let mut acc = b[0].clone();
        for (i, &e) in exponents.iter().enumerate() {
            acc = monoid.mul(&acc, &monoid.pow_signed(t, t_inv, e));
            acc = monoid.mul(&acc, &b[i + 1]);
        }
        acc
    };

    let ah = monoid.mul(a, h);
    let ah_inv = monoid.mul(&h_inv, &a_inv);
    let lhs = eval(&ah, &ah_inv);
    let u_a = eval(a, &a_inv);

    let k: i64 = exponents.iter().sum();
    let conj =
        |x: &MonoidElem, y: &MonoidElem, y_inv: &MonoidElem| monoid.mul(&monoid.mul(y_inv, x), y);
    let mut prefix = monoid.one();
    if k > 0 {
        // h^{a^{-1}} h^{a^{-2}} ... h^{a^{-k}}
        for j in 1..=k {
            let y = monoid.pow_signed(a, &a_inv, -j);
            let y_inv = monoid.pow_signed(a, &a_inv, j);
            prefix = monoid.mul(&prefix, &conj(h, &y, &y_inv));
        }
    } else if k < 0 {
        // h^{-1} h^{-a} ... h^{-a^{-1-k}}
        for s in 0..=(-1 - k) {
            let y = monoid.pow_signed(a, &a_inv, s);
            let y_inv = monoid.pow_signed(a, &a_inv, -s);
            prefix = monoid.mul(&prefix, &conj(&h_inv, &y, &y_inv));
        }
    }
    let rhs = monoid.mul(&prefix, &u_a);
    Ok(SubstitutionIdentity {
        exponent_total: k,
        holds: lhs == rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::{self, CatalogKind};
    use crate::words::parse_word;
    use std::collections::BTreeMap;

    fn gl2_f2() -> (FiniteRing, FiniteGroup, Vec<RingElem>) {
        let ring = FiniteRing::matrix_ring(2, 2).unwrap();
        let (units, embedding) = unit_group(&ring).unwrap();
        (ring, units, embedding)
    }

    #[test]
    fn ring_axioms_spot_check() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let s3 = catalog::build(&CatalogKind::Symmetric(3)).unwrap();
        let rings = vec![
            FiniteRing::modint(12).unwrap(),
            FiniteRing::matrix_ring(3, 2).unwrap(),
            FiniteRing::group_ring(2, s3).unwrap(),
        ];
        let mut rng = StdRng::seed_from_u64(7);
        for ring in rings {
            let rand_elem = |rng: &mut StdRng| {
                RingElem(
                    (0..ring.dimension())
                        .map(|_| rng.random_range(0..ring.modulus()))
                        .collect(),
                )
            };
            for _ in 0..50 {
                let a = rand_elem(&mut rng);
                let b = rand_elem(&mut rng);
                let c = rand_elem(&mut rng);
                assert_eq!(
                    ring.mul(&ring.mul(&a, &b), &c),
                    ring.mul(&a, &ring.mul(&b, &c))
                );
                assert_eq!(
                    ring.mul(&a, &ring.add(&b, &c)),
                    ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c))
                );
                assert_eq!(ring.mul(&ring.one(), &a), a);
                assert_eq!(ring.mul(&a, &ring.one()), a);
            }
            assert!(ring.modulus() == 1 || ring.one() != ring.zero());
        }
    }

    #[test]
    fn inverses_in_each_backend() {
        let z12 = FiniteRing::modint(12).unwrap();
        assert!(z12.try_inverse(&z12.element(vec![5]).unwrap()).is_some());
        assert!(z12.try_inverse(&z12.element(vec![4]).unwrap()).is_none());

        let (ring, units, embedding) = gl2_f2();
        assert_eq!(units.order(), 6);
        for e in &embedding {
            let inv = ring.try_inverse(e).unwrap();
            assert_eq!(ring.mul(e, &inv), ring.one());
        }

        let z4 = catalog::build(&CatalogKind::Cyclic(4)).unwrap();
        let gr = FiniteRing::group_ring(3, z4).unwrap();
        let basis1 = gr.group_basis(1).unwrap();
        let inv = gr.try_inverse(&basis1).unwrap();
        assert_eq!(gr.mul(&basis1, &inv), gr.one());
        // 1 + g + g^2 + g^3 annihilates g - 1, so it cannot be a unit.
        let all_ones = gr.element(vec![1, 1, 1, 1]).unwrap();
        assert!(gr.try_inverse(&all_ones).is_none());
    }

    fn xy() -> Vec<String> {
        vec!["x".to_string(), "y".to_string()]
    }

    /// The two-equation example {a x^3 y^2 + y^7 b x - 1 = 0,
    /// x y^2 x + y^7 x^5 = 0}; only its matrix shape matters here.
    fn two_equation_example() -> RingEquationSystem {
        let ring = FiniteRing::modint(5).unwrap();
        let (units, embedding) = unit_group(&ring).unwrap();
        let a = ring.element(vec![2]).unwrap();
        let b = ring.element(vec![3]).unwrap();
        let eq1 = vec![
            RingTerm {
                factors: vec![
                    RingFactor::Scalar(a),
                    RingFactor::VarPow { var: 1, exp: 3 },
                    RingFactor::VarPow { var: 2, exp: 2 },
                ],
            },
            RingTerm {
                factors: vec![
                    RingFactor::VarPow { var: 2, exp: 7 },
                    RingFactor::Scalar(b),
                    RingFactor::VarPow { var: 1, exp: 1 },
                ],
            },
            RingTerm::scalar(ring.from_integer(-1)),
        ];
        let eq2 = vec![
            RingTerm {
                factors: vec![
                    RingFactor::VarPow { var: 1, exp: 1 },
                    RingFactor::VarPow { var: 2, exp: 2 },
                    RingFactor::VarPow { var: 1, exp: 1 },
                ],
            },
            RingTerm {
                factors: vec![
                    RingFactor::VarPow { var: 2, exp: 7 },
                    RingFactor::VarPow { var: 1, exp: 5 },
                ],
            },
        ];
        RingEquationSystem::new(ring, 2, vec![eq1, eq2], units, embedding).unwrap()
    }

    #[test]
    fn homogeneity_matrix_of_worked_example() {
        let sys = two_equation_example();
        let expected = IntMatrix::from_i64_rows(&[
            vec![3, 2, 1, 0],
            vec![1, 7, 1, 0],
            vec![0, 0, 1, 0],
            vec![2, 2, 0, 1],
            vec![5, 7, 0, 1],
        ]);
        assert_eq!(sys.homogeneity_matrix(), expected);
        assert_eq!(sys.homogeneity_modulus(), Int::from(1));
        // Modulus 1 means a trivial bound, which always divides.
        let verdict = homogeneity_verdict(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(verdict.bound, 1);
        assert!(verdict.divides);
    }

    #[test]
    fn homogeneity_small_cases() {
        // a x^3 + b x = 0 over Z/5.
        let ring = FiniteRing::modint(5).unwrap();
        let (units, embedding) = unit_group(&ring).unwrap();
        let a = ring.element(vec![2]).unwrap();
        let b = ring.element(vec![1]).unwrap();
        let eq = vec![
            RingTerm {
                factors: vec![RingFactor::Scalar(a), RingFactor::VarPow { var: 1, exp: 3 }],
            },
            RingTerm {
                factors: vec![RingFactor::Scalar(b), RingFactor::VarPow { var: 1, exp: 1 }],
            },
        ];
        let sys =
            RingEquationSystem::new(ring.clone(), 1, vec![eq], units.clone(), embedding.clone())
                .unwrap();
        assert_eq!(
            sys.homogeneity_matrix(),
            IntMatrix::from_i64_rows(&[vec![3, 1], vec![1, 1]])
        );
        assert_eq!(sys.homogeneity_modulus(), Int::from(2));

        // A single constant equation c = 0 in one unknown.
        let c = ring.element(vec![3]).unwrap();
        let sys =
            RingEquationSystem::new(ring, 1, vec![vec![RingTerm::scalar(c)]], units, embedding)
                .unwrap();
        assert_eq!(
            sys.homogeneity_matrix(),
            IntMatrix::from_i64_rows(&[vec![0, 1]])
        );
        assert_eq!(sys.count_solutions(1000).unwrap(), 0);
    }

    #[test]
    fn counting_trivial_and_contradictory() {
        let (ring, units, embedding) = gl2_f2();
        // x - x = 0 is satisfied by every unit.
        let eq = vec![
            RingTerm {
                factors: vec![RingFactor::VarPow { var: 1, exp: 1 }],
            },
            RingTerm {
                factors: vec![
                    RingFactor::Scalar(ring.from_integer(-1)),
                    RingFactor::VarPow { var: 1, exp: 1 },
                ],
            },
        ];
        let sys =
            RingEquationSystem::new(ring.clone(), 1, vec![eq], units.clone(), embedding.clone())
                .unwrap();
        assert_eq!(sys.count_solutions(100).unwrap(), 6);

        // 1 = 0 has no solutions in a nontrivial ring.
        let sys = RingEquationSystem::new(
            ring.clone(),
            1,
            vec![vec![RingTerm::scalar(ring.one())]],
            units,
            embedding,
        )
        .unwrap();
        assert_eq!(sys.count_solutions(100).unwrap(), 0);
    }

    #[test]
    fn cubic_plus_linear_over_gl2_f2() {
        let (ring, units, embedding) = gl2_f2();
        let eq = vec![
            RingTerm {
                factors: vec![RingFactor::VarPow { var: 1, exp: 3 }],
            },
            RingTerm {
                factors: vec![RingFactor::VarPow { var: 1, exp: 1 }],
            },
        ];
        let sys = RingEquationSystem::new(ring, 1, vec![eq], units, embedding).unwrap();
        assert_eq!(sys.count_solutions(100).unwrap(), 4);
        assert_eq!(sys.homogeneity_modulus(), Int::from(2));
        let verdict = homogeneity_verdict(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(verdict.solution_count, 4);
        assert_eq!(verdict.bound, 2);
        assert!(verdict.divides);
        // Coefficient-free: the centralizer is the whole unit subgroup.
        assert_eq!(verdict.breakdown.unit_centralizer_order, Some(6));
    }

    #[test]
    fn translation_matches_group_invariant_factor() {
        let g = catalog::build(&CatalogKind::Symmetric(3)).unwrap();
        let u = xy();
        let words = ["x^2 y", "x y^3"]
            .iter()
            .map(|t| parse_word(t, &u, &BTreeMap::new(), &g).unwrap())
            .collect();
        let sys = GeneralizedSystem::plain(g, 2, words).unwrap();
        let ring_sys = ring_system_from_plain(&sys, 2).unwrap();
        assert_eq!(
            ring_sys.homogeneity_modulus(),
            sys.full_matrix().invariant_factor(2)
        );
        let verdict = homogeneity_verdict(&ring_sys, &SolveOptions::default()).unwrap();
        assert!(verdict.divides);
        // The ring-side solution count is exactly the group-side count.
        assert_eq!(
            verdict.solution_count,
            crate::solver::count_solutions(&sys, 10_000).unwrap()
        );
    }

    #[test]
    fn translation_modulus_matches_on_random_systems() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let groups = [
            catalog::build(&CatalogKind::Symmetric(3)).unwrap(),
            catalog::build(&CatalogKind::Cyclic(4)).unwrap(),
        ];
        let mut rng = StdRng::seed_from_u64(808);
        for trial in 0..100 {
            let g = &groups[trial % groups.len()];
            let arity = rng.random_range(1..=2);
            let eq_count = rng.random_range(1..=3);
            let words: Vec<Word> = (0..eq_count)
                .map(|_| {
                    let len = rng.random_range(1..=6);
                    let letters = (0..len)
                        .map(|_| {
                            if rng.random_range(0..4) == 0 {
                                crate::words::Letter::Coeff(rng.random_range(0..g.order()))
                            } else {
                                crate::words::Letter::Var {
                                    index: rng.random_range(1..=arity),
                                    inverse: rng.random_range(0..2) == 1,
                                }
                            }
                        })
                        .collect();
                    Word::new(arity, letters).unwrap()
                })
                .collect();
            let sys = GeneralizedSystem::plain(g.clone(), arity, words).unwrap();
            let ring_sys = ring_system_from_plain(&sys, 2 + (trial % 3) as u64).unwrap();
            assert_eq!(
                ring_sys.homogeneity_modulus(),
                sys.full_matrix().invariant_factor(arity),
                "modulus mismatch on trial {trial}"
            );
        }
    }

    #[test]
    fn verdict_sweep_over_small_ring_corpus() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let s3 = catalog::build(&CatalogKind::Symmetric(3)).unwrap();
        let z4 = catalog::build(&CatalogKind::Cyclic(4)).unwrap();
        let mut rings: Vec<FiniteRing> = (2..=12).map(|k| FiniteRing::modint(k).unwrap()).collect();
        rings.push(FiniteRing::matrix_ring(2, 2).unwrap());
        rings.push(FiniteRing::matrix_ring(3, 2).unwrap());
        rings.push(FiniteRing::group_ring(2, s3).unwrap());
        rings.push(FiniteRing::group_ring(3, z4).unwrap());
        let mut rng = StdRng::seed_from_u64(909);
        for ring in rings {
            let (units, embedding) = unit_group(&ring).unwrap();
            for _ in 0..5 {
                let arity = rng.random_range(1..=2);
                if (units.order() as u128).pow(arity as u32) > 100_000 {
                    continue;
                }
                let eq_count = rng.random_range(1..=2);
                let mut equations = Vec::new();
                for _ in 0..eq_count {
                    let term_count = rng.random_range(1..=3);
                    let mut terms = Vec::new();
                    for _ in 0..term_count {
                        let factor_count = rng.random_range(1..=3);
                        let factors = (0..factor_count)
                            .map(|_| {
                                if rng.random_range(0..4) == 0 {
                                    RingFactor::Scalar(
                                        ring.from_integer(rng.random_range(-4i64..=4)),
                                    )
                                } else {
                                    RingFactor::VarPow {
                                        var: rng.random_range(1..=arity),
                                        exp: rng.random_range(1..=3),
                                    }
                                }
                            })
                            .collect();
                        terms.push(RingTerm { factors });
                    }
                    equations.push(terms);
                }
                let sys = RingEquationSystem::new(
                    ring.clone(),
                    arity,
                    equations,
                    units.clone(),
                    embedding.clone(),
                )
                .unwrap();
                let verdict = homogeneity_verdict(&sys, &SolveOptions::default()).unwrap();
                assert!(
                    verdict.divides,
                    "verdict failed over {}: {verdict:?}",
                    ring.describe()
                );
            }
        }
    }

    #[test]
    fn power_sum_single_power_shape() {
        // One summand x^n: the bound collapses to gcd(|G|, n).
        let z6 = catalog::build(&CatalogKind::Cyclic(6)).unwrap();
        let ring = FiniteRing::group_ring(2, z6.clone()).unwrap();
        let embedding: Vec<RingElem> = z6
            .elements()
            .map(|g| ring.group_basis(g).unwrap())
            .collect();
        let x = parse_word("x", &["x".to_string()], &BTreeMap::new(), &z6).unwrap();
        let r = power_sum_verdict(&ring, &z6, &embedding, &[x], &[3], &SolveOptions::default())
            .unwrap();
        // k = m = 1: LCM bound applies, gcd(6, 3) = 3; x^3 = 1 has 3 roots.
        assert_eq!(r.solution_count, 3);
        assert_eq!(r.bound, 3);
        assert!(r.divides);
    }

    #[test]
    fn power_sum_fewer_summands_than_unknowns() {
        let (ring, units, embedding) = gl2_f2();
        let w = parse_word("x y", &xy(), &BTreeMap::new(), &units).unwrap();
        let r = power_sum_verdict(
            &ring,
            &units,
            &embedding,
            &[w],
            &[2],
            &SolveOptions::default(),
        )
        .unwrap();
        // k = 1 < m = 2: the |G| bound applies.
        assert_eq!(r.bound, 6);
        assert!(r.divides);
        assert_eq!(r.breakdown.bound_checks.len(), 3);
    }

    #[test]
    fn power_sum_unit_exponents() {
        let z6 = catalog::build(&CatalogKind::Cyclic(6)).unwrap();
        let ring = FiniteRing::group_ring(5, z6.clone()).unwrap();
        let embedding: Vec<RingElem> = z6
            .elements()
            .map(|g| ring.group_basis(g).unwrap())
            .collect();
        let x = parse_word("x", &["x".to_string()], &BTreeMap::new(), &z6).unwrap();
        let r = power_sum_verdict(&ring, &z6, &embedding, &[x], &[1], &SolveOptions::default())
            .unwrap();
        // l = 1: bound gcd(6, 1) = 1, trivially divides.
        assert_eq!(r.bound, 1);
        assert!(r.divides);
    }

    #[test]
    fn substitution_identity_cases() {
        let s3 = catalog::build(&CatalogKind::Symmetric(3)).unwrap();
        let m = MonoidRef::Group(&s3);
        let one = m.one();
        // Zero exponent total: u(ah) = u(a) whenever preconditions hold.
        let a = MonoidElem::Group(s3.element_by_name("(123)").unwrap());
        let h = MonoidElem::Group(s3.element_by_name("(132)").unwrap());
        let r = substitution_identity_check(
            m,
            &[one.clone(), one.clone(), one.clone()],
            &a,
            &h,
            &[2, -2],
        )
        .unwrap();
        assert_eq!(r.exponent_total, 0);
        assert!(r.holds);

        // h = identity: both sides are u(a) with an empty twist.
        let r =
            substitution_identity_check(m, &[one.clone(), one.clone()], &a, &one, &[3]).unwrap();
        assert!(r.holds);

        // Abelian carrier, positive total: u(ah) = h^k u(a).
        let z6 = catalog::build(&CatalogKind::Cyclic(6)).unwrap();
        let mz = MonoidRef::Group(&z6);
        let one_z = mz.one();
        let r = substitution_identity_check(
            mz,
            &[MonoidElem::Group(2), one_z.clone(), one_z],
            &MonoidElem::Group(1),
            &MonoidElem::Group(3),
            &[2, 1],
        )
        .unwrap();
        assert_eq!(r.exponent_total, 3);
        assert!(r.holds);

        // A ring carrier.
        let z12 = FiniteRing::modint(12).unwrap();
        let mr = MonoidRef::Ring(&z12);
        let b0 = MonoidElem::Ring(z12.element(vec![4]).unwrap());
        let b1 = MonoidElem::Ring(z12.element(vec![3]).unwrap());
        let ar = MonoidElem::Ring(z12.element(vec![5]).unwrap());
        let hr = MonoidElem::Ring(z12.element(vec![7]).unwrap());
        let r = substitution_identity_check(mr, &[b0, b1], &ar, &hr, &[-2]).unwrap();
        assert!(r.holds);

        // Precondition violations are reported.
        let bad = substitution_identity_check(
            m,
            &[
                MonoidElem::Group(s3.element_by_name("(12)").unwrap()),
                m.one(),
            ],
            &a,
            &h,
            &[1],
        );
        assert!(matches!(bad, Err(RingError::PreconditionViolated(_))));
    }

    #[test]
    fn modulus_ceiling() {
        assert!(FiniteRing::modint(1 << 31).is_ok());
        assert!(matches!(
            FiniteRing::modint((1 << 31) + 1),
            Err(RingError::BadElement(_))
        ));
        assert!(matches!(
            FiniteRing::modint(0),
            Err(RingError::BadElement(_))
        ));
    }

    #[test]
    fn enumeration_caps() {
        let big = FiniteRing::matrix_ring(7, 5).unwrap();
        assert!(matches!(
            big.all_elements(),
            Err(RingError::EnumerationTooLarge { .. })
        ));
        let (ring, units, embedding) = gl2_f2();
        let eq = vec![RingTerm {
            factors: vec![RingFactor::VarPow { var: 1, exp: 1 }],
        }];
        let sys = RingEquationSystem::new(ring, 1, vec![eq], units, embedding).unwrap();
        assert!(matches!(
            sys.count_solutions(3),
            Err(RingError::SearchSpaceTooLarge { .. })
        ));
    }
}
