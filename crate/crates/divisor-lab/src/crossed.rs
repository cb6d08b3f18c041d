//! Right actions of one finite group on another by automorphisms, the
//! semidirect product they induce, crossed-homomorphism counting through the
//! section correspondence (cross-checked against the direct definition), the
//! divisibility verdict, and abelianization invariants.

use thiserror::Error;

use crate::group::{gcd_u64, ElementId, FiniteGroup, GroupError, Subgroup};
use crate::report::{Breakdown, DivisibilityReport};

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("the supplied elements do not generate the actor group")]
    NotGenerating,
    #[error("search space of {space} candidate maps exceeds the cap of {cap}")]
    SearchSpaceTooLarge { space: u128, cap: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A right action of `actor` on `target` by automorphisms:
/// `perm[f][b] = b^f`, with `b^{f f'} = (b^f)^{f'}`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    actor: FiniteGroup,
    target: FiniteGroup,
    perms: Vec<Vec<ElementId>>,
}

impl GroupAction {
    pub fn new(
        actor: FiniteGroup,
        target: FiniteGroup,
        perms: Vec<Vec<ElementId>>,
    ) -> Result<Self, ActionError> {
        if perms.len() != actor.order() {
            return Err(ActionError::InvalidAction(format!(
                "{} permutations for an actor of order {}",
                perms.len(),
                actor.order()
            )));
        }
        let n = target.order();
        for (f, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(ActionError::InvalidAction(format!(
                    "map for actor element {f} has length {}",
                    p.len()
                )));
            }
            let mut seen = vec![false; n];
            for &img in p {
                if img >= n || seen[img] {
                    return Err(ActionError::InvalidAction(format!(
                        "map for actor element {f} is not a permutation"
                    )));
                }
                seen[img] = true;
            }
            for b1 in 0..n {
                for b2 in 0..n {
                    if p[target.mul(b1, b2)] != target.mul(p[b1], p[b2]) {
                        return Err(ActionError::InvalidAction(format!(
                            "map for actor element {f} is not an automorphism"
                        )));
                    }
                }
            }
        }
        if perms[0] != (0..n).collect::<Vec<_>>() {
            return Err(ActionError::InvalidAction(
                "identity must act trivially".into(),
            ));
        }
        for f1 in actor.elements() {
            for f2 in actor.elements() {
                let composed = actor.mul(f1, f2);
                for b in 0..n {
                    if perms[composed][b] != perms[f2][perms[f1][b]] {
                        return Err(ActionError::InvalidAction(format!(
                            "action of {}*{} is not act-then-act",
                            actor.name(f1),
                            actor.name(f2)
                        )));
                    }
                }
            }
        }
        Ok(GroupAction {
            actor,
            target,
            perms,
        })
    }

    pub fn trivial(actor: FiniteGroup, target: FiniteGroup) -> Self {
        let id: Vec<ElementId> = target.elements().collect();
        GroupAction {
            perms: vec![id; actor.order()],
            actor,
            target,
        }
    }

    pub fn actor(&self) -> &FiniteGroup {
        &self.actor
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    /// b^f
    pub fn apply(&self, f: ElementId, b: ElementId) -> ElementId {
        self.perms[f][b]
    }

    pub fn perms(&self) -> &[Vec<ElementId>] {
        &self.perms
    }
}

/// The semidirect product built from an action, with its projection onto the
/// actor and the (f, b) section.
#[derive(Debug, Clone)]
pub struct SemidirectProduct {
    group: FiniteGroup,
    target_order: usize,
}

impl SemidirectProduct {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// π: the homomorphism onto the actor.
    pub fn project(&self, id: ElementId) -> ElementId {
        id / self.target_order
    }

    /// The element (f, b).
    pub fn pair(&self, f: ElementId, b: ElementId) -> ElementId {
        f * self.target_order + b
    }

    /// The target component of an element.
    pub fn fiber_part(&self, id: ElementId) -> ElementId {
        id % self.target_order
    }
}

/// Builds F ⋉ B with multiplication (f, b)(f', b') = (f f', b^{f'} b').
pub fn semidirect_product(action: &GroupAction) -> Result<SemidirectProduct, ActionError> {
    let f_ord = action.actor.order();
    let b_ord = action.target.order();
    let order = f_ord * b_ord;
    let id = |f: ElementId, b: ElementId| f * b_ord + b;
    let mut table = vec![vec![0; order]; order];
    for f1 in 0..f_ord {
        for b1 in 0..b_ord {
            for f2 in 0..f_ord {
                for b2 in 0..b_ord {
                    let f = action.actor.mul(f1, f2);
                    let b = action.target.mul(action.apply(f2, b1), b2);
                    table[id(f1, b1)][id(f2, b2)] = id(f, b);
                }
            }
        }
    }
    let mut names = Vec::with_capacity(order);
    for f in 0..f_ord {
        for b in 0..b_ord {
            names.push(format!(
                "({}|{})",
                action.actor.name(f),
                action.target.name(b)
            ));
        }
    }
    let label = format!("{}:{}", action.actor.label(), action.target.label());
    let group = FiniteGroup::from_table_labeled(table, names, &label)?;
    Ok(SemidirectProduct {
        group,
        target_order: b_ord,
    })
}

/// A small generating set found greedily (largest extension first); used as
/// the default for crossed-homomorphism enumeration.
pub fn small_generating_set(group: &FiniteGroup) -> Vec<ElementId> {
    let mut gens: Vec<ElementId> = Vec::new();
    let mut span = group.subgroup_generated(&[]);
    while span.order() < group.order() {
        let best = group
            .elements()
            .filter(|x| !span.contains(*x))
            .max_by_key(|&x| {
                let mut candidate = gens.clone();
                candidate.push(x);
                group.subgroup_generated(&candidate).order()
            })
            .expect("group not yet generated");
        gens.push(best);
        span = group.subgroup_generated(&gens);
    }
    gens
}

/// Counts crossed homomorphisms α: F → B (α(ff') = α(f)^{f'} α(f')) through
/// the correspondence with homomorphisms φ: F → F ⋉ B satisfying π∘φ = id:
/// candidate generator images are enumerated inside the fibers of π and each
/// extension is validated against the full multiplication table.
///
/// `generators` defaults to every non-identity element of the actor, which is
/// always a generating set; callers with large actors should pass something
/// smaller (see [`small_generating_set`]).
pub fn count_crossed_homs(
    action: &GroupAction,
    generators: Option<&[ElementId]>,
    cap: u64,
) -> Result<u64, ActionError> {
    let f_grp = &action.actor;
    let fiber = action.target.order() as u128;
    let gens: Vec<ElementId> = match generators {
        Some(g) => g.to_vec(),
        None => (1..f_grp.order()).collect(),
    };
    if f_grp.subgroup_generated(&gens).order() != f_grp.order() {
        return Err(ActionError::NotGenerating);
    }
    let space = fiber.pow(gens.len() as u32);
    if space > cap as u128 {
        return Err(ActionError::SearchSpaceTooLarge { space, cap });
    }
    let sp = semidirect_product(action)?;
    let spg = sp.group();

    // Breadth-first decomposition: every element is (parent) * (generator).
    let mut parent_edge: Vec<Option<(ElementId, usize)>> = vec![None; f_grp.order()];
    let mut bfs_order: Vec<ElementId> = vec![0];
    let mut seen = vec![false; f_grp.order()];
    seen[0] = true;
    let mut head = 0;
    while head < bfs_order.len() {
        let x = bfs_order[head];
        head += 1;
        for (gi, &g) in gens.iter().enumerate() {
            let y = f_grp.mul(x, g);
            if !seen[y] {
                seen[y] = true;
                parent_edge[y] = Some((x, gi));
                bfs_order.push(y);
            }
        }
    }

    let b_ord = action.target.order();
    let mut choice = vec![0usize; gens.len()];
    let mut count = 0u64;
    let mut images = vec![0 as ElementId; f_grp.order()];
    loop {
        // φ(gen_i) = (gen_i, choice_i) lies in the fiber over gen_i.
        let gen_images: Vec<ElementId> = gens
            .iter()
            .zip(&choice)
            .map(|(&g, &b)| sp.pair(g, b))
            .collect();
        images[0] = spg.identity();
        for &x in &bfs_order[1..] {
            let (p, gi) = parent_edge[x].expect("bfs reaches everything");
            images[x] = spg.mul(images[p], gen_images[gi]);
        }
        let hom = f_grp.elements().all(|x| {
            f_grp
                .elements()
                .all(|y| images[f_grp.mul(x, y)] == spg.mul(images[x], images[y]))
        });
        if hom && f_grp.elements().all(|x| sp.project(images[x]) == x) {
            count += 1;
        }
        // Odometer over fiber choices.
        let mut i = gens.len();
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < b_ord {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Direct-definition count: backtracking over maps α: F → B, checking
/// α(xy) = α(x)^y α(y) incrementally. Independent of the semidirect-product
/// construction.
pub fn count_crossed_homs_direct(action: &GroupAction, cap: u64) -> Result<u64, ActionError> {
    let f_ord = action.actor.order();
    let b_ord = action.target.order();
    let space = (b_ord as u128).pow(f_ord as u32);
    if space > cap as u128 {
        return Err(ActionError::SearchSpaceTooLarge { space, cap });
    }
    fn consistent(action: &GroupAction, alpha: &[ElementId], t: usize) -> bool {
        let f = &action.actor;
        let b = &action.target;
        for x in 0..=t {
            for y in 0..=t {
                let xy = f.mul(x, y);
                if xy > t || (x != t && y != t && xy != t) {
                    continue;
                }
                if alpha[xy] != b.mul(action.apply(y, alpha[x]), alpha[y]) {
                    return false;
                }
            }
        }
        true
    }
    fn search(action: &GroupAction, alpha: &mut Vec<ElementId>, t: usize) -> u64 {
        if t == action.actor.order() {
            return 1;
        }
        let mut total = 0;
        for img in 0..action.target.order() {
            alpha[t] = img;
            if consistent(action, alpha, t) {
                total += search(action, alpha, t + 1);
            }
        }
        total
    }
    let mut alpha = vec![0; f_ord];
    Ok(search(action, &mut alpha, 0))
}

/// Invariant factors d_1 | d_2 | ... of G/[G, G], ascending. The trivial
/// quotient yields an empty sequence.
pub fn abelianization(group: &FiniteGroup) -> Vec<u64> {
    let mut commutators = Vec::new();
    for a in group.elements() {
        for b in group.elements() {
            commutators.push(group.commutator(a, b));
        }
    }
    let derived = group.subgroup_generated(&commutators);
    let quotient = quotient_by_normal(group, &derived);
    abelian_invariant_factors(&quotient)
}

/// exp(G/[G, G]): the largest abelianization invariant factor (1 for a
/// perfect group).
pub fn abelianization_exponent(group: &FiniteGroup) -> u64 {
    abelianization(group).last().copied().unwrap_or(1)
}

/// |G/[G, G]|: the product of the invariant factors.
pub fn abelianization_order(group: &FiniteGroup) -> u64 {
    abelianization(group).iter().product()
}

fn quotient_by_normal(group: &FiniteGroup, normal: &Subgroup) -> FiniteGroup {
    assert!(normal.is_normal(), "quotient needs a normal subgroup");
    // Coset representative: the smallest member of each coset.
    let mut rep_of = vec![usize::MAX; group.order()];
    let mut reps: Vec<ElementId> = Vec::new();
    for x in group.elements() {
        if rep_of[x] != usize::MAX {
            continue;
        }
        let mut coset: Vec<ElementId> = normal.members().iter().map(|&h| group.mul(x, h)).collect();
        coset.sort_unstable();
        let rep_index = reps.len();
        reps.push(coset[0]);
        for c in coset {
            rep_of[c] = rep_index;
        }
    }
    let table: Vec<Vec<usize>> = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| rep_of[group.mul(a, b)]).collect())
        .collect();
    let names = reps
        .iter()
        .map(|&r| format!("[{}]", group.name(r)))
        .collect();
    FiniteGroup::from_table_labeled(table, names, "quotient").expect("quotient is a group")
}

/// Invariant factors of a finite abelian group from its power structure: for
/// each prime p, the partition of the p-part is recovered from the sizes of
/// the kernels of x -> x^{p^i}; parts are then matched up across primes.
fn abelian_invariant_factors(group: &FiniteGroup) -> Vec<u64> {
    assert!(
        group.is_abelian(),
        "invariant factors need an abelian group"
    );
    let n = group.order() as u64;
    if n == 1 {
        return Vec::new();
    }
    let mut parts_per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    let mut remaining = n;
    let mut p = 2;
    while remaining > 1 {
        if remaining.is_multiple_of(p) {
            while remaining.is_multiple_of(p) {
                remaining /= p;
            }
            // kernel_exponents[i] = log_p |{x : x^{p^i} = 1}|.
            let mut kernel_exponents: Vec<u32> = vec![0];
            loop {
                let i = kernel_exponents.len() as u32;
                let power = p.pow(i);
                let size = group
                    .elements()
                    .filter(|&x| group.pow(x, power as i64) == 0)
                    .count() as u64;
                let log = size.ilog(p);
                assert_eq!(p.pow(log), size, "kernel size must be a prime power");
                if log == *kernel_exponents.last().unwrap() {
                    break;
                }
                kernel_exponents.push(log);
            }
            // growth[i] counts parts of size >= i+1; conjugate to parts.
            let growth: Vec<u32> = kernel_exponents.windows(2).map(|w| w[1] - w[0]).collect();
            let num_parts = growth.first().copied().unwrap_or(0) as usize;
            let mut parts = vec![0u32; num_parts];
            for (i, &g) in growth.iter().enumerate() {
                for part in parts.iter_mut().take(g as usize) {
                    *part = (i + 1) as u32;
                }
            }
            // Descending part sizes.
            parts.sort_unstable_by(|a, b| b.cmp(a));
            parts_per_prime.push((p, parts));
        }
        p += 1;
        if p * p > remaining && remaining > 1 {
            p = remaining;
        }
    }
    let width = parts_per_prime
        .iter()
        .map(|(_, parts)| parts.len())
        .max()
        .unwrap_or(0);
    // The largest parts of every prime line up in the last factor.
    let mut factors = vec![1u64; width];
    for (p, parts) in parts_per_prime {
        for (slot, &e) in parts.iter().enumerate() {
            factors[width - 1 - slot] *= p.pow(e);
        }
    }
    let total: u64 = factors.iter().product();
    assert_eq!(total, n, "invariant factors must multiply to the order");
    for w in factors.windows(2) {
        assert_eq!(w[1] % w[0], 0, "invariant factors must form a chain");
    }
    factors
}

/// Divisibility verdicts for a crossed-homomorphism count: one report per
/// admissible n (each divisor of exp(F/F') indexes the actor onto Z/nZ) with
/// bound GCD(|B|, n), plus the summary bound GCD(exp(F/F'), |B|).
pub fn crossed_hom_verdict(
    action: &GroupAction,
    generators: Option<&[ElementId]>,
    cap: u64,
) -> Result<Vec<DivisibilityReport>, ActionError> {
    let count = count_crossed_homs(action, generators, cap)?;
    let b_ord = action.target.order() as u64;
    let exponent = abelianization_exponent(&action.actor);
    let mut reports = Vec::new();
    for n in 1..=exponent {
        if !exponent.is_multiple_of(n) {
            continue;
        }
        reports.push(DivisibilityReport::new(
            format!("GCD(|B|, {n})"),
            count,
            gcd_u64(b_ord, n),
            Breakdown {
                note: Some(format!("indexing modulus n = {n}")),
                ..Breakdown::default()
            },
        ));
    }
    reports.push(DivisibilityReport::new(
        "GCD(exp(F/F'), |B|)",
        count,
        gcd_u64(exponent, b_ord),
        Breakdown {
            note: Some(format!("exp(F/F') = {exponent}")),
            ..Breakdown::default()
        },
    ));
    Ok(reports)
}

/// All automorphisms of a small group, as image tables.
pub fn automorphisms(group: &FiniteGroup) -> Vec<Vec<ElementId>> {
    let n = group.order();
    let gens = small_generating_set(group);
    if gens.is_empty() {
        return vec![vec![0]];
    }
    // Candidate images per generator must preserve element order.
    let candidates: Vec<Vec<ElementId>> = gens
        .iter()
        .map(|&g| {
            let ord = group.element_order(g);
            group
                .elements()
                .filter(|&x| group.element_order(x) == ord)
                .collect()
        })
        .collect();
    let mut result = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<ElementId> = choice
            .iter()
            .enumerate()
            .map(|(i, &c)| candidates[i][c])
            .collect();
        if let Some(perm) = extend_hom(group, &gens, &images) {
            let mut seen = vec![false; n];
            if perm.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                result.push(perm);
            }
        }
        let mut i = gens.len();
        loop {
            if i == 0 {
                result.sort_unstable();
                result.dedup();
                return result;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Extends generator images to a full endomorphism table if consistent.
fn extend_hom(
    group: &FiniteGroup,
    gens: &[ElementId],
    images: &[ElementId],
) -> Option<Vec<ElementId>> {
    let n = group.order();
    let mut image = vec![usize::MAX; n];
    image[0] = 0;
    let mut queue = vec![0];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (i, &g) in gens.iter().enumerate() {
            let y = group.mul(x, g);
            let img = group.mul(image[x], images[i]);
            if image[y] == usize::MAX {
                image[y] = img;
                queue.push(y);
            } else if image[y] != img {
                return None;
            }
        }
    }
    if image.contains(&usize::MAX) {
        return None;
    }
    for x in 0..n {
        for y in 0..n {
            if image[group.mul(x, y)] != group.mul(image[x], image[y]) {
                return None;
            }
        }
    }
    Some(image)
}

/// Every action of `actor` on `target`: one per homomorphism from the actor
/// into the automorphism group, found by extending generator images.
pub fn all_actions(actor: &FiniteGroup, target: &FiniteGroup) -> Vec<GroupAction> {
    let auts = automorphisms(target);
    let n = target.order();
    let id_perm: Vec<ElementId> = (0..n).collect();
    let aut_index: std::collections::HashMap<Vec<ElementId>, usize> = auts
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i))
        .collect();
    let gens = small_generating_set(actor);
    if gens.is_empty() {
        return vec![GroupAction::trivial(actor.clone(), target.clone())];
    }
    let mut actions = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        // Try to extend gen_i -> auts[choice_i] to a full assignment with
        // perm(x * g) = perm(x) then perm(g), the right-action law.
        let mut table: Vec<Option<usize>> = vec![None; actor.order()];
        table[0] = Some(aut_index[&id_perm]);
        let mut queue = vec![0];
        let mut head = 0;
        let mut ok = true;
        'bfs: while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (i, &g) in gens.iter().enumerate() {
                let y = actor.mul(x, g);
                let composed: Vec<ElementId> = (0..n)
                    .map(|b| auts[choice[i]][auts[table[x].unwrap()][b]])
                    .collect();
                let Some(&idx) = aut_index.get(&composed) else {
                    ok = false;
                    break 'bfs;
                };
                match table[y] {
                    None => {
                        table[y] = Some(idx);
                        queue.push(y);
                    }
                    Some(existing) if existing != idx => {
                        ok = false;
                        break 'bfs;
                    }
                    _ => {}
                }
            }
        }
        if ok && table.iter().all(Option::is_some) {
            let perms: Vec<Vec<ElementId>> =
                table.iter().map(|t| auts[t.unwrap()].clone()).collect();
            if let Ok(action) = GroupAction::new(actor.clone(), target.clone(), perms) {
                actions.push(action);
            }
        }
        let mut i = gens.len();
        loop {
            if i == 0 {
                return actions;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < auts.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}
