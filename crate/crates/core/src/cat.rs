//! Finite categories, presented and materialized.
//!
//! A presentation carries generators and relations between composable words;
//! materialization runs a congruence closure on the bounded word universe
//! and fails loudly when the bound is too small to exhibit a closed
//! composition table. Word problems are undecidable in general, so the
//! bound is part of the semantics, not an optimization.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::budget::{Budget, BudgetExceeded};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatError {
    MalformedWord(String),
    NonComposableRelation(usize),
    BoundExceeded { bound: usize, witness: String },
    Budget(BudgetExceeded),
    InvalidCategory(String),
}

impl fmt::Display for CatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatError::MalformedWord(w) => write!(f, "word is not a composable path: {w}"),
            CatError::NonComposableRelation(i) => {
                write!(f, "relation {i} equates words with different endpoints")
            }
            CatError::BoundExceeded { bound, witness } => write!(
                f,
                "congruence closure did not stabilize within word length {bound} (witness: {witness})"
            ),
            CatError::Budget(b) => write!(f, "{b}"),
            CatError::InvalidCategory(s) => write!(f, "invalid category data: {s}"),
        }
    }
}

impl From<BudgetExceeded> for CatError {
    fn from(b: BudgetExceeded) -> CatError {
        CatError::Budget(b)
    }
}

/// A composable path: `start` followed by generator indices applied left to
/// right. The empty path is the identity at `start`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word {
    pub start: usize,
    pub gens: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategoryPresentation {
    pub objects: Vec<String>,
    /// (source, target, label)
    pub generators: Vec<(usize, usize, String)>,
    pub relations: Vec<(Word, Word)>,
}

/// A materialized finite category with a total composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    /// (source, target, label)
    pub morphisms: Vec<(usize, usize, String)>,
    /// identity morphism index per object
    pub identities: Vec<usize>,
    /// (second_applied, first_applied) -> composite; keys for composable pairs
    pub composition: BTreeMap<(usize, usize), usize>,
}

impl FiniteCategory {
    pub fn hom_set(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&m| self.morphisms[m].0 == a && self.morphisms[m].1 == b)
            .collect()
    }

    /// `g` after `f`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.composition.get(&(g, f)).copied()
    }

    pub fn validate(&self) -> Result<(), CatError> {
        if self.identities.len() != self.objects.len() {
            return Err(CatError::InvalidCategory("one identity per object required".into()));
        }
        for (x, &e) in self.identities.iter().enumerate() {
            let (s, t, _) = self.morphisms[e];
            if s != x || t != x {
                return Err(CatError::InvalidCategory(format!(
                    "identity of object {x} has wrong endpoints"
                )));
            }
        }
        for f in 0..self.morphisms.len() {
            let (s, t, _) = self.morphisms[f];
            if self.compose(f, self.identities[s]) != Some(f)
                || self.compose(self.identities[t], f) != Some(f)
            {
                return Err(CatError::InvalidCategory(format!("identity law fails at {f}")));
            }
        }
        for f in 0..self.morphisms.len() {
            for g in 0..self.morphisms.len() {
                let (fs, ft, _) = self.morphisms[f];
                let (gs, gt, _) = self.morphisms[g];
                if ft != gs {
                    continue;
                }
                let gf = self
                    .compose(g, f)
                    .ok_or_else(|| CatError::InvalidCategory("composition not total".into()))?;
                let (cs, ct, _) = self.morphisms[gf];
                if cs != fs || ct != gt {
                    return Err(CatError::InvalidCategory("composite has wrong endpoints".into()));
                }
                for h in 0..self.morphisms.len() {
                    let (hs, _, _) = self.morphisms[h];
                    if hs != gt {
                        continue;
                    }
                    let left = self.compose(h, gf);
                    let right = self.compose(h, g).and_then(|hg| self.compose(hg, f));
                    if left != right {
                        return Err(CatError::InvalidCategory(format!(
                            "associativity fails on ({h},{g},{f})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Presentation with every non-identity morphism as a generator and the
    /// full multiplication table as relations.
    pub fn to_presentation(&self) -> FiniteCategoryPresentation {
        let mut gen_of = BTreeMap::new();
        let mut generators = Vec::new();
        for m in 0..self.morphisms.len() {
            if self.identities.contains(&m) {
                continue;
            }
            gen_of.insert(m, generators.len());
            generators.push(self.morphisms[m].clone());
        }
        let word_of = |m: usize, start: usize| -> Word {
            if self.identities.contains(&m) {
                Word { start, gens: vec![] }
            } else {
                Word { start, gens: vec![gen_of[&m]] }
            }
        };
        let mut relations = Vec::new();
        for (&(g, f), &c) in &self.composition {
            let (fs, ft, _) = self.morphisms[f];
            let mut lhs = word_of(f, fs);
            lhs.gens.extend(word_of(g, ft).gens);
            relations.push((lhs, word_of(c, fs)));
        }
        FiniteCategoryPresentation { objects: self.objects.clone(), generators, relations }
    }

    pub fn from_poset(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> FiniteCategory {
        let n = labels.len();
        let mut morphisms = Vec::new();
        let mut index = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    index.insert((a, b), morphisms.len());
                    morphisms.push((a, b, format!("{}<={}", labels[a], labels[b])));
                }
            }
        }
        let identities = (0..n).map(|a| index[&(a, a)]).collect();
        let mut composition = BTreeMap::new();
        for (&(a, b), &f) in &index {
            for (&(b2, c), &g) in &index {
                if b == b2 {
                    composition.insert((g, f), index[&(a, c)]);
                }
            }
        }
        FiniteCategory { objects: labels, morphisms, identities, composition }
    }
}

impl FiniteCategoryPresentation {
    fn word_endpoints(&self, w: &Word) -> Result<(usize, usize), CatError> {
        let mut at = w.start;
        for &g in &w.gens {
            let (s, t, _) = self
                .generators
                .get(g)
                .ok_or_else(|| CatError::MalformedWord(format!("generator {g} out of range")))?;
            if *s != at {
                return Err(CatError::MalformedWord(format!("{w:?}")));
            }
            at = *t;
        }
        Ok((w.start, at))
    }

    /// Congruence closure on words of length `<= bound`. Succeeds when the
    /// bounded quotient supports a total composition table; otherwise errors
    /// with a witness pair that cannot be composed inside the bound.
    pub fn materialize(&self, bound: usize, budget: &Budget) -> Result<FiniteCategory, CatError> {
        for (i, (l, r)) in self.relations.iter().enumerate() {
            let le = self.word_endpoints(l)?;
            let re = self.word_endpoints(r)?;
            if le != re {
                return Err(CatError::NonComposableRelation(i));
            }
        }
        // enumerate all composable words up to the bound
        let mut words: Vec<Word> = Vec::new();
        let mut index: BTreeMap<Word, usize> = BTreeMap::new();
        let mut frontier: Vec<Word> = (0..self.objects.len())
            .map(|o| Word { start: o, gens: vec![] })
            .collect();
        for w in &frontier {
            index.insert(w.clone(), words.len());
            words.push(w.clone());
        }
        for _ in 0..bound {
            let mut next = Vec::new();
            for w in &frontier {
                let (_, end) = self.word_endpoints(w)?;
                for (g, (s, _, _)) in self.generators.iter().enumerate() {
                    if *s == end {
                        budget.charge(1)?;
                        let mut w2 = w.clone();
                        w2.gens.push(g);
                        index.insert(w2.clone(), words.len());
                        words.push(w2.clone());
                        next.push(w2);
                    }
                }
            }
            frontier = next;
        }
        // union-find over word indices
        let mut parent: Vec<usize> = (0..words.len()).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut changed = true;
        while changed {
            changed = false;
            for wi in 0..words.len() {
                let w = words[wi].clone();
                for (l, r) in self.relations.iter() {
                    for (pat, rep) in [(l, r), (r, l)] {
                        let plen = pat.gens.len();
                        if plen > w.gens.len() {
                            continue;
                        }
                        for pos in 0..=w.gens.len() - plen {
                            if w.gens[pos..pos + plen] != pat.gens[..] {
                                continue;
                            }
                            // object at the splice point must match pat.start
                            let mut at = w.start;
                            for &g in &w.gens[..pos] {
                                at = self.generators[g].1;
                            }
                            if at != pat.start {
                                continue;
                            }
                            let mut new_gens = w.gens[..pos].to_vec();
                            new_gens.extend(rep.gens.iter().copied());
                            new_gens.extend(w.gens[pos + plen..].iter().copied());
                            if new_gens.len() > bound {
                                continue;
                            }
                            budget.charge(1)?;
                            let w2 = Word { start: w.start, gens: new_gens };
                            let j = *index.get(&w2).expect("universe closed under rewrites");
                            let (ri, rj) = (find(&mut parent, wi), find(&mut parent, j));
                            if ri != rj {
                                parent[ri] = rj;
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        // canonical representative per class: shortest, then lexicographically least
        let mut rep_of_class: BTreeMap<usize, usize> = BTreeMap::new();
        for wi in 0..words.len() {
            let root = find(&mut parent, wi);
            let best = rep_of_class.entry(root).or_insert(wi);
            let cand = &words[wi];
            let cur = &words[*best];
            if (cand.gens.len(), cand) < (cur.gens.len(), cur) {
                *best = wi;
            }
        }
        let mut class_ids: Vec<usize> = rep_of_class.keys().copied().collect();
        class_ids.sort_by(|a, b| {
            let wa = &words[rep_of_class[a]];
            let wb = &words[rep_of_class[b]];
            (wa.gens.len(), wa).cmp(&(wb.gens.len(), wb))
        });
        let class_number: BTreeMap<usize, usize> =
            class_ids.iter().enumerate().map(|(n, &c)| (c, n)).collect();
        let morphisms: Vec<(usize, usize, String)> = class_ids
            .iter()
            .map(|&c| {
                let w = &words[rep_of_class[&c]];
                let (s, t) = self.word_endpoints(w).expect("words stay composable");
                let label = if w.gens.is_empty() {
                    format!("id_{}", self.objects[s])
                } else {
                    w.gens
                        .iter()
                        .map(|&g| self.generators[g].2.clone())
                        .collect::<Vec<_>>()
                        .join(".")
                };
                (s, t, label)
            })
            .collect();
        let identities: Vec<usize> = (0..self.objects.len())
            .map(|o| {
                let w = Word { start: o, gens: vec![] };
                class_number[&find(&mut parent, index[&w])]
            })
            .collect();
        // composition table via representative concatenation
        let mut composition = BTreeMap::new();
        for (fi, &fc) in class_ids.iter().enumerate() {
            let fw = words[rep_of_class[&fc]].clone();
            let (_, fend) = self.word_endpoints(&fw).unwrap();
            for (gi, &gc) in class_ids.iter().enumerate() {
                let gw = words[rep_of_class[&gc]].clone();
                if gw.start != fend {
                    continue;
                }
                let mut cat = fw.clone();
                cat.gens.extend(gw.gens.iter().copied());
                if cat.gens.len() > bound {
                    return Err(CatError::BoundExceeded {
                        bound,
                        witness: format!("{:?} . {:?}", fw, gw),
                    });
                }
                let ci = class_number[&find(&mut parent, index[&cat])];
                composition.insert((gi, fi), ci);
            }
        }
        let cat =
            FiniteCategory { objects: self.objects.clone(), morphisms, identities, composition };
        cat.validate()
            .map_err(|e| CatError::InvalidCategory(format!("materialized table broken: {e}")))?;
        Ok(cat)
    }
}

/// Exhaustive isomorphism search between two finite categories. Returns the
/// object and morphism bijections of the first isomorphism found (object
/// permutations in lexicographic order, morphism assignments backtracked in
/// index order), or `None`.
pub fn find_isomorphism(
    a: &FiniteCategory,
    b: &FiniteCategory,
    budget: &Budget,
) -> Result<Option<(Vec<usize>, Vec<usize>)>, BudgetExceeded> {
    if a.objects.len() != b.objects.len() || a.morphisms.len() != b.morphisms.len() {
        return Ok(None);
    }
    let n = a.objects.len();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        budget.charge(1)?;
        if hom_profile_matches(a, b, &perm) {
            if let Some(mor) = try_morphism_bijection(a, b, &perm, budget)? {
                return Ok(Some((perm, mor)));
            }
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

fn hom_profile_matches(a: &FiniteCategory, b: &FiniteCategory, perm: &[usize]) -> bool {
    for x in 0..a.objects.len() {
        for y in 0..a.objects.len() {
            if a.hom_set(x, y).len() != b.hom_set(perm[x], perm[y]).len() {
                return false;
            }
        }
    }
    true
}

fn try_morphism_bijection(
    a: &FiniteCategory,
    b: &FiniteCategory,
    perm: &[usize],
    budget: &Budget,
) -> Result<Option<Vec<usize>>, BudgetExceeded> {
    let m = a.morphisms.len();
    let mut assign: Vec<Option<usize>> = vec![None; m];
    let mut used = vec![false; m];
    fn consistent(
        a: &FiniteCategory,
        b: &FiniteCategory,
        assign: &[Option<usize>],
        f: usize,
        img: usize,
    ) -> bool {
        if a.identities.contains(&f) != b.identities.contains(&img) {
            return false;
        }
        for g in 0..assign.len() {
            let Some(gi) = assign[g] else { continue };
            if let Some(c) = a.compose(g, f) {
                if let Some(ci) = assign[c] {
                    match b.compose(gi, img) {
                        Some(x) if x == ci => {}
                        _ => return false,
                    }
                }
            }
            if let Some(c) = a.compose(f, g) {
                if let Some(ci) = assign[c] {
                    match b.compose(img, gi) {
                        Some(x) if x == ci => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }
    fn backtrack(
        a: &FiniteCategory,
        b: &FiniteCategory,
        perm: &[usize],
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        f: usize,
        budget: &Budget,
    ) -> Result<bool, BudgetExceeded> {
        if f == a.morphisms.len() {
            return Ok(true);
        }
        let (s, t, _) = a.morphisms[f];
        for img in b.hom_set(perm[s], perm[t]) {
            if used[img] {
                continue;
            }
            budget.charge(1)?;
            if !consistent(a, b, assign, f, img) {
                continue;
            }
            assign[f] = Some(img);
            used[img] = true;
            if backtrack(a, b, perm, assign, used, f + 1, budget)? {
                return Ok(true);
            }
            assign[f] = None;
            used[img] = false;
        }
        Ok(false)
    }
    if backtrack(a, b, perm, &mut assign, &mut used, 0, budget)? {
        Ok(Some(assign.into_iter().map(|x| x.unwrap()).collect()))
    } else {
        Ok(None)
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow_category() -> FiniteCategory {
        FiniteCategory::from_poset(vec!["0".into(), "1".into()], |a, b| a <= b)
    }

    #[test]
    fn poset_category_validates() {
        let c = arrow_category();
        assert!(c.validate().is_ok());
        assert_eq!(c.morphisms.len(), 3);
        assert_eq!(c.hom_set(0, 1).len(), 1);
        assert_eq!(c.hom_set(1, 0).len(), 0);
    }

    #[test]
    fn presentation_roundtrip() {
        let c = arrow_category();
        let p = c.to_presentation();
        let budget = Budget::unlimited();
        let c2 = p.materialize(4, &budget).unwrap();
        assert_eq!(c2.morphisms.len(), c.morphisms.len());
        let iso = find_isomorphism(&c, &c2, &budget).unwrap();
        assert!(iso.is_some());
    }

    #[test]
    fn relation_collapses_generators() {
        // two objects, two parallel generators forced equal
        let p = FiniteCategoryPresentation {
            objects: vec!["a".into(), "b".into()],
            generators: vec![(0, 1, "f".into()), (0, 1, "g".into())],
            relations: vec![(
                Word { start: 0, gens: vec![0] },
                Word { start: 0, gens: vec![1] },
            )],
        };
        let c = p.materialize(3, &Budget::unlimited()).unwrap();
        assert_eq!(c.hom_set(0, 1).len(), 1);
    }

    #[test]
    fn unbounded_monoid_fails_loudly() {
        // one object, one generator, no relations: free monoid, never closes
        let p = FiniteCategoryPresentation {
            objects: vec!["x".into()],
            generators: vec![(0, 0, "t".into())],
            relations: vec![],
        };
        match p.materialize(4, &Budget::unlimited()) {
            Err(CatError::BoundExceeded { .. }) => {}
            other => panic!("expected bound failure, got {other:?}"),
        }
    }

    #[test]
    fn iso_search_distinguishes() {
        let chain2 = FiniteCategory::from_poset(vec!["0".into(), "1".into()], |a, b| a <= b);
        let discrete2 = FiniteCategory::from_poset(vec!["0".into(), "1".into()], |a, b| a == b);
        let budget = Budget::unlimited();
        assert!(find_isomorphism(&chain2, &discrete2, &budget).unwrap().is_none());
        // relabeled copy is found isomorphic
        let chain2b = FiniteCategory::from_poset(vec!["x".into(), "y".into()], |a, b| a <= b);
        assert!(find_isomorphism(&chain2, &chain2b, &budget).unwrap().is_some());
    }
}
