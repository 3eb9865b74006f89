//! Best matching functions between finite totally ordered sets.
//!
//! Both sides are given by size; position `i` is the `i`-th smallest element.
//! A relation `rel(b, a)` reads "`b ⇝ a`".

/// Elements of a set listed in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderedIndexSet {
    pub items: Vec<usize>,
}

impl OrderedIndexSet {
    /// Sorts `indices` by `key`, breaking ties by the index itself.
    pub fn by_key<K: Ord>(indices: impl IntoIterator<Item = usize>, key: impl Fn(usize) -> K) -> Self {
        let mut items: Vec<usize> = indices.into_iter().collect();
        items.sort_by(|&a, &b| key(a).cmp(&key(b)).then(a.cmp(&b)));
        OrderedIndexSet { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchResult {
    /// Matched positions of `A`, increasing.
    pub a0: Vec<usize>,
    /// Matched positions of `B`, increasing.
    pub b0: Vec<usize>,
    /// `(a, f(a))` in the order the recursion assigns them (top of `A` first).
    pub f: Vec<(usize, usize)>,
    pub ac: Vec<usize>,
    pub bc: Vec<usize>,
}

impl MatchResult {
    pub fn image(&self, a: usize) -> Option<usize> {
        self.f.iter().find(|&&(x, _)| x == a).map(|&(_, b)| b)
    }
}

/// Checks `b1 ⇝ a1 ∧ b2 ⇝ a1 ∧ b2 ⇝ a2 ⟹ b1 ⇝ a2` for `a1 ≥ a2`, `b1 ≥ b2`.
pub fn is_traversable(na: usize, nb: usize, rel: impl Fn(usize, usize) -> bool) -> bool {
    for a1 in 0..na {
        for a2 in 0..=a1 {
            for b1 in 0..nb {
                for b2 in 0..=b1 {
                    if rel(b1, a1) && rel(b2, a1) && rel(b2, a2) && !rel(b1, a2) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Greedy best matching: walk `A` from the top, give each `a` the smallest
/// free `b` with `b ⇝ a`.
pub fn best_match(na: usize, nb: usize, rel: impl Fn(usize, usize) -> bool) -> MatchResult {
    debug_assert!(is_traversable(na, nb, &rel), "relation is not traversable");
    let mut used = vec![false; nb];
    let mut matched = vec![false; na];
    let mut f = Vec::new();
    for a in (0..na).rev() {
        if let Some(b) = (0..nb).find(|&b| !used[b] && rel(b, a)) {
            used[b] = true;
            matched[a] = true;
            f.push((a, b));
        }
    }
    let (a0, ac) = (0..na).partition(|&a| matched[a]);
    let (b0, bc) = (0..nb).partition(|&b| used[b]);
    MatchResult { a0, b0, f, ac, bc }
}

/// Hall's condition, decided through a maximum bipartite matching.
pub fn hall_check(na: usize, nb: usize, rel: impl Fn(usize, usize) -> bool) -> bool {
    max_matching_size(na, nb, &rel) == na
}

/// Size of a maximum matching (augmenting paths).
pub fn max_matching_size(na: usize, nb: usize, rel: impl Fn(usize, usize) -> bool) -> usize {
    fn augment(
        a: usize,
        nb: usize,
        rel: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for b in 0..nb {
            if rel(b, a) && !seen[b] {
                seen[b] = true;
                if owner[b].is_none_or(|o| augment(o, nb, rel, seen, owner)) {
                    owner[b] = Some(a);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; nb];
    let mut size = 0;
    for a in 0..na {
        let mut seen = vec![false; nb];
        if augment(a, nb, &rel, &mut seen, &mut owner) {
            size += 1;
        }
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sides_match_nothing() {
        let r = best_match(0, 3, |_, _| true);
        assert!(r.a0.is_empty() && r.b0.is_empty());
        assert_eq!(r.bc, vec![0, 1, 2]);
        let r = best_match(2, 0, |_, _| true);
        assert_eq!(r.ac, vec![0, 1]);
        assert!(hall_check(0, 0, |_, _| false));
        assert!(!hall_check(1, 2, |_, _| false));
    }

    #[test]
    fn ladder_relation_matches_greedily() {
        // A-side ys: -3, -1; B-side ys: -2, 0; b ⇝ a iff y_b > y_a.
        let ya = [-3, -1];
        let yb = [-2, 0];
        let r = best_match(2, 2, |b, a| yb[b] > ya[a]);
        assert_eq!(r.f, vec![(1, 1), (0, 0)]);
        assert!(r.ac.is_empty() && r.bc.is_empty());
    }

    #[test]
    fn ordered_set_breaks_ties_by_index() {
        let keys = [2, 1, 2, 0];
        let s = OrderedIndexSet::by_key(0..4, |i| keys[i]);
        assert_eq!(s.items, vec![3, 1, 0, 2]);
    }
}
