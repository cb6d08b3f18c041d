//! Finitely presented groups mapped into finite groups: homomorphism
//! enumeration, degree indexings onto Z/nZ, the core subgroup a homomorphism
//! carves out of a subgroup, extendability of degree-one twists, and the two
//! closure conditions under which a homomorphism set has size divisible by
//! the subgroup order.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::group::{ElementId, FiniteGroup, Subgroup};
use crate::words::{Letter, Word};

#[derive(Debug, Error)]
pub enum HomError {
    #[error("search space of {space} image tuples exceeds the cap of {cap}")]
    SearchSpaceTooLarge { space: u128, cap: u64 },
    #[error("word must have degree one, got {got} mod {n}")]
    DegreeMismatch { got: u64, n: u64 },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid indexing: {0}")]
    InvalidIndexing(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Generators g_1..g_k subject to coefficient-free relator words.
#[derive(Debug, Clone)]
pub struct FinitePresentation {
    generator_count: usize,
    relators: Vec<Word>,
}

impl FinitePresentation {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self, HomError> {
        for r in &relators {
            if r.arity() != generator_count {
                return Err(HomError::InvalidPresentation(format!(
                    "relator arity {} does not match {} generators",
                    r.arity(),
                    generator_count
                )));
            }
            if !r.is_coefficient_free() {
                return Err(HomError::InvalidPresentation(
                    "relators must be coefficient-free words".into(),
                ));
            }
        }
        Ok(FinitePresentation {
            generator_count,
            relators,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Do the images satisfy every relator?
    pub fn is_hom(&self, group: &FiniteGroup, images: &[ElementId]) -> bool {
        self.relators
            .iter()
            .all(|r| r.evaluate(group, images) == group.identity())
    }
}

/// All generator-image tuples that kill every relator.
pub fn enumerate_homs(
    presentation: &FinitePresentation,
    group: &FiniteGroup,
    cap: u64,
) -> Result<Vec<Vec<ElementId>>, HomError> {
    let k = presentation.generator_count();
    let space = (group.order() as u128).pow(k as u32);
    if space > cap as u128 {
        return Err(HomError::SearchSpaceTooLarge { space, cap });
    }
    let mut out = Vec::new();
    let mut tuple = vec![0 as ElementId; k];
    loop {
        if presentation.is_hom(group, &tuple) {
            out.push(tuple.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < group.order() {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// A degree assignment making the presented group map onto Z/nZ: generator
/// degrees with every relator of degree zero and the degrees generating the
/// whole cyclic group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indexing {
    n: u64,
    degrees: Vec<u64>,
}

impl Indexing {
    pub fn new(
        presentation: &FinitePresentation,
        n: u64,
        degrees: Vec<u64>,
    ) -> Result<Self, HomError> {
        if n == 0 {
            return Err(HomError::InvalidIndexing(
                "only positive moduli are supported".into(),
            ));
        }
        if degrees.len() != presentation.generator_count() {
            return Err(HomError::InvalidIndexing(format!(
                "{} degrees for {} generators",
                degrees.len(),
                presentation.generator_count()
            )));
        }
        let idx = Indexing {
            n,
            degrees: degrees.into_iter().map(|d| d % n).collect(),
        };
        for r in presentation.relators() {
            let d = idx.word_degree(r);
            if d != 0 {
                return Err(HomError::InvalidIndexing(format!(
                    "relator has degree {d} mod {n}, expected 0"
                )));
            }
        }
        // The degrees must generate Z/nZ.
        let g = idx
            .degrees
            .iter()
            .fold(n, |acc, &d| crate::group::gcd_u64(acc, d));
        if g != 1 {
            return Err(HomError::InvalidIndexing(format!(
                "generator degrees only reach the subgroup of index {g}"
            )));
        }
        Ok(idx)
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn generator_degree(&self, i: usize) -> u64 {
        self.degrees[i]
    }

    pub fn word_degree(&self, w: &Word) -> u64 {
        let n = self.n;
        w.letters().iter().fold(0u64, |acc, l| match l {
            Letter::Var { index, inverse } => {
                let d = self.degrees[index - 1];
                if *inverse {
                    (acc + n - d) % n
                } else {
                    (acc + d) % n
                }
            }
            Letter::Coeff(_) => acc,
        })
    }

    /// Shortest word of degree one in a canonical letter order (g_1, g_1^-1,
    /// g_2, ...), found by breadth-first search over residues. With n = 1 the
    /// empty word qualifies.
    pub fn first_degree_one_word(&self, generator_count: usize) -> Word {
        let n = self.n;
        let target = 1 % n;
        let mut parent: Vec<Option<(u64, Letter)>> = vec![None; n as usize];
        let mut visited = vec![false; n as usize];
        visited[0] = true;
        let mut queue = std::collections::VecDeque::from([0u64]);
        while let Some(r) = queue.pop_front() {
            if r == target {
                let mut letters = Vec::new();
                let mut cur = r;
                while let Some((prev, letter)) = parent[cur as usize] {
                    letters.push(letter);
                    cur = prev;
                }
                letters.reverse();
                return Word::new(generator_count, letters).expect("letters are in range");
            }
            for i in 0..generator_count {
                for inverse in [false, true] {
                    let d = self.degrees[i];
                    let next = if inverse {
                        (r + n - d) % n
                    } else {
                        (r + d) % n
                    };
                    if !visited[next as usize] {
                        visited[next as usize] = true;
                        parent[next as usize] = Some((
                            r,
                            Letter::Var {
                                index: i + 1,
                                inverse,
                            },
                        ));
                        queue.push_back(next);
                    }
                }
            }
        }
        unreachable!("an epimorphic indexing always reaches residue 1")
    }
}

/// An indexed homomorphism: generator images together with the degree data.
#[derive(Debug, Clone)]
pub struct IndexedHom<'a> {
    pub presentation: &'a FinitePresentation,
    pub group: &'a FiniteGroup,
    pub indexing: &'a Indexing,
    pub images: Vec<ElementId>,
}

impl<'a> IndexedHom<'a> {
    pub fn new(
        presentation: &'a FinitePresentation,
        group: &'a FiniteGroup,
        indexing: &'a Indexing,
        images: Vec<ElementId>,
    ) -> Result<Self, HomError> {
        if images.len() != presentation.generator_count() {
            return Err(HomError::PreconditionViolated(format!(
                "{} images for {} generators",
                images.len(),
                presentation.generator_count()
            )));
        }
        if !presentation.is_hom(group, &images) {
            return Err(HomError::PreconditionViolated(
                "images do not satisfy the relators".into(),
            ));
        }
        Ok(IndexedHom {
            presentation,
            group,
            indexing,
            images,
        })
    }

    pub fn evaluate(&self, w: &Word) -> ElementId {
        w.evaluate(self.group, &self.images)
    }

    /// Closure of {(φ(g_i), deg g_i)} inside G x Z/nZ: the image of the
    /// indexed group under f -> (φ(f), deg f).
    fn graph_closure(&self) -> HashSet<(ElementId, u64)> {
        let n = self.indexing.modulus();
        let mut set: HashSet<(ElementId, u64)> = HashSet::new();
        set.insert((0, 0));
        let gens: Vec<(ElementId, u64)> = self
            .images
            .iter()
            .zip(self.indexing.degrees())
            .map(|(&g, &d)| (g, d))
            .collect();
        let mut frontier: Vec<(ElementId, u64)> = vec![(0, 0)];
        while let Some((a, da)) = frontier.pop() {
            for &(g, dg) in &gens {
                for next in [
                    (self.group.mul(a, g), (da + dg) % n),
                    (self.group.mul(a, self.group.inv(g)), (da + n - dg) % n),
                ] {
                    if set.insert(next) {
                        frontier.push(next);
                    }
                }
            }
        }
        set
    }

    /// Image of the whole group under φ.
    pub fn image(&self) -> Vec<ElementId> {
        let set: BTreeSet<ElementId> = self.graph_closure().into_iter().map(|(a, _)| a).collect();
        set.into_iter().collect()
    }

    /// Image of the degree-zero kernel: exactly the fiber over 0 of the
    /// graph closure, since (a, 0) lies in the closure iff some degree-zero
    /// element maps to a.
    pub fn kernel_image(&self) -> Vec<ElementId> {
        let set: BTreeSet<ElementId> = self
            .graph_closure()
            .into_iter()
            .filter_map(|(a, d)| (d == 0).then_some(a))
            .collect();
        set.into_iter().collect()
    }

    /// The core of `h` under this homomorphism: elements lying in every
    /// conjugate H^{φ(f)} and centralizing the degree-zero image.
    pub fn core(&self, h: &Subgroup) -> Subgroup {
        assert!(
            h.group().same_group(self.group),
            "subgroup of a different group"
        );
        let image = self.image();
        let kernel_image = self.kernel_image();
        let members: Vec<ElementId> = h
            .members()
            .iter()
            .copied()
            .filter(|&x| {
                image
                    .iter()
                    .all(|&a| h.contains(self.group.conjugate(x, a)))
                    && kernel_image
                        .iter()
                        .all(|&z| self.group.mul(x, z) == self.group.mul(z, x))
            })
            .collect();
        Subgroup::from_members(self.group.clone(), members)
            .expect("core conditions define a subgroup")
    }

    /// Candidate images for the twist ψ: ψ agrees with φ in degree zero and
    /// ψ(f1) = φ(f1)·g. Writing g_i = f1^{d_i} h_i with deg h_i = 0 forces
    /// ψ(g_i) = (φ(f1)g)^{d_i} φ(f1)^{-d_i} φ(g_i).
    pub fn twist_images(&self, f1: &Word, g: ElementId) -> Vec<ElementId> {
        let grp = self.group;
        let phi_f1 = self.evaluate(f1);
        let twisted = grp.mul(phi_f1, g);
        self.images
            .iter()
            .zip(self.indexing.degrees())
            .map(|(&img, &d)| {
                let d = d as i64;
                grp.mul(grp.mul(grp.pow(twisted, d), grp.pow(phi_f1, -d)), img)
            })
            .collect()
    }
}

/// Outcome of [`twist_extension_check`].
#[derive(Debug, Clone)]
pub struct TwistExtension {
    /// Answer via the two closed-form conditions: g centralizes the image of
    /// the degree-zero kernel and (φ(f1)g)^n = φ(f1)^n.
    pub exists_by_conditions: bool,
    /// Answer via explicit construction and verification of ψ.
    pub exists_by_construction: bool,
    /// Generator images of ψ when the construction succeeds.
    pub witness: Option<Vec<ElementId>>,
}

impl TwistExtension {
    pub fn agree(&self) -> bool {
        self.exists_by_conditions == self.exists_by_construction
    }
}

/// Decides whether φ can be modified into a homomorphism ψ that agrees with
/// φ on all degree-zero elements and sends a fixed degree-one element f1 to
/// φ(f1)·g — twice, independently: once through the closed-form conditions
/// and once by building ψ and verifying it.
pub fn twist_extension_check(
    phi: &IndexedHom<'_>,
    f1: &Word,
    g: ElementId,
) -> Result<TwistExtension, HomError> {
    let n = phi.indexing.modulus();
    let d1 = phi.indexing.word_degree(f1);
    if d1 != 1 % n {
        return Err(HomError::DegreeMismatch { got: d1, n });
    }
    let grp = phi.group;
    let phi_f1 = phi.evaluate(f1);

    // Route 1: the closed-form conditions.
    let kernel_image = phi.kernel_image();
    let centralizes = kernel_image.iter().all(|&z| grp.mul(g, z) == grp.mul(z, g));
    let power_match = grp.pow(grp.mul(phi_f1, g), n as i64) == grp.pow(phi_f1, n as i64);
    let exists_by_conditions = centralizes && power_match;

    // Route 2: construct ψ and verify it point by point.
    let psi = phi.twist_images(f1, g);
    let relators_hold = phi.presentation.is_hom(grp, &psi);
    let psi_f1_ok = relators_hold && f1.evaluate(grp, &psi) == grp.mul(phi_f1, g);
    // ψ must agree with φ on every degree-zero element: the closure of
    // {(φ(g_i), ψ(g_i), deg g_i)} in G x G x Z/nZ may only touch diagonal
    // pairs in the zero fiber.
    let diagonal_ok = psi_f1_ok && {
        let mut set: HashSet<(ElementId, ElementId, u64)> = HashSet::new();
        set.insert((0, 0, 0));
        let gens: Vec<(ElementId, ElementId, u64)> = phi
            .images
            .iter()
            .zip(&psi)
            .zip(phi.indexing.degrees())
            .map(|((&a, &b), &d)| (a, b, d))
            .collect();
        let mut frontier: Vec<(ElementId, ElementId, u64)> = vec![(0, 0, 0)];
        let mut ok = true;
        'outer: while let Some((a, b, d)) = frontier.pop() {
            for &(ga, gb, gd) in &gens {
                let steps = [
                    (grp.mul(a, ga), grp.mul(b, gb), (d + gd) % n),
                    (
                        grp.mul(a, grp.inv(ga)),
                        grp.mul(b, grp.inv(gb)),
                        (d + n - gd) % n,
                    ),
                ];
                for next in steps {
                    if set.insert(next) {
                        if next.2 == 0 && next.0 != next.1 {
                            ok = false;
                            break 'outer;
                        }
                        frontier.push(next);
                    }
                }
            }
        }
        ok
    };
    let exists_by_construction = relators_hold && psi_f1_ok && diagonal_ok;

    Ok(TwistExtension {
        exists_by_conditions,
        exists_by_construction,
        witness: exists_by_construction.then_some(psi),
    })
}

/// Which closure condition failed, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureCondition {
    Conjugation,
    DegreeOneTwist,
}

#[derive(Debug, Clone)]
pub struct ClosureFailure {
    pub condition: ClosureCondition,
    pub member: Vec<ElementId>,
    pub twist_by: ElementId,
}

/// Verdict of [`closure_check`].
#[derive(Debug, Clone)]
pub struct ClosureVerdict {
    pub closed: bool,
    pub failure: Option<ClosureFailure>,
    /// ψ(g_i) ∈ φ(g_i)·core held for every generated twist.
    pub twist_stays_in_coset: bool,
    pub set_size: u64,
    pub subgroup_order: u64,
    /// Present only when both conditions hold.
    pub divisible: Option<bool>,
}

/// Checks a set of homomorphism image tuples for the two closure conditions
/// (conjugation by every element of `h`, and the degree-one twist by every
/// element of each member's core), and — when both hold — whether |set| is
/// divisible by |h|. Requires |h| to divide the indexing modulus.
pub fn closure_check(
    presentation: &FinitePresentation,
    group: &FiniteGroup,
    indexing: &Indexing,
    phi_set: &BTreeSet<Vec<ElementId>>,
    h: &Subgroup,
) -> Result<ClosureVerdict, HomError> {
    if !indexing.modulus().is_multiple_of(h.order() as u64) {
        return Err(HomError::PreconditionViolated(format!(
            "modulus {} is not a multiple of the subgroup order {}",
            indexing.modulus(),
            h.order()
        )));
    }
    for images in phi_set {
        if !presentation.is_hom(group, images) {
            return Err(HomError::PreconditionViolated(
                "set contains a tuple that is not a homomorphism".into(),
            ));
        }
    }
    let f1 = indexing.first_degree_one_word(presentation.generator_count());
    let mut twist_stays_in_coset = true;

    for images in phi_set {
        // Closure under conjugation by h.
        for &x in h.members() {
            let conjugated: Vec<ElementId> =
                images.iter().map(|&a| group.conjugate(a, x)).collect();
            if !phi_set.contains(&conjugated) {
                return Ok(ClosureVerdict {
                    closed: false,
                    failure: Some(ClosureFailure {
                        condition: ClosureCondition::Conjugation,
                        member: images.clone(),
                        twist_by: x,
                    }),
                    twist_stays_in_coset,
                    set_size: phi_set.len() as u64,
                    subgroup_order: h.order() as u64,
                    divisible: None,
                });
            }
        }
        // Closure under the degree-one twist by the member's core.
        let phi = IndexedHom::new(presentation, group, indexing, images.clone())?;
        let core = phi.core(h);
        for &t in core.members() {
            let psi = phi.twist_images(&f1, t);
            debug_assert!(
                presentation.is_hom(group, &psi),
                "core twists always produce homomorphisms"
            );
            for (a, b) in images.iter().zip(&psi) {
                // ψ(g) ∈ φ(g)·core, generator by generator.
                if !core.contains(group.mul(group.inv(*a), *b)) {
                    twist_stays_in_coset = false;
                }
            }
            if !phi_set.contains(&psi) {
                return Ok(ClosureVerdict {
                    closed: false,
                    failure: Some(ClosureFailure {
                        condition: ClosureCondition::DegreeOneTwist,
                        member: images.clone(),
                        twist_by: t,
                    }),
                    twist_stays_in_coset,
                    set_size: phi_set.len() as u64,
                    subgroup_order: h.order() as u64,
                    divisible: None,
                });
            }
        }
    }
    let size = phi_set.len() as u64;
    let order = h.order() as u64;
    Ok(ClosureVerdict {
        closed: true,
        failure: None,
        twist_stays_in_coset,
        set_size: size,
        subgroup_order: order,
        divisible: Some(size.is_multiple_of(order)),
    })
}
