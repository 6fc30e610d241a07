use std::fmt;

use crate::error::{Error, Result};

use super::bits::WorldSet;

/// A binary relation on worlds `0..n`, stored as one successor bitset per world.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    rows: Vec<WorldSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            rows: vec![WorldSet::new(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Relation {
            n,
            rows: (0..n).map(|w| WorldSet::singleton(n, w)).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        Relation {
            n,
            rows: vec![WorldSet::full(n); n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Relation::empty(n);
        for (a, b) in pairs {
            for w in [a, b] {
                if w >= n {
                    return Err(Error::WorldOutOfRange {
                        world: w,
                        worlds: n,
                    });
                }
            }
            r.insert(a, b);
        }
        Ok(r)
    }

    /// Decodes the row-major low `n*n` bits of `mask` (bit `a*n + b` is the pair `(a, b)`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut r = Relation::empty(n);
        for a in 0..n {
            for b in 0..n {
                if mask >> (a * n + b) & 1 == 1 {
                    r.insert(a, b);
                }
            }
        }
        r
    }

    pub fn from_rows(rows: Vec<WorldSet>) -> Self {
        let n = rows.len();
        debug_assert!(rows.iter().all(|r| r.universe() == n));
        Relation { n, rows }
    }

    pub fn worlds(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.n && self.rows[a].contains(b)
    }

    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        self.rows[a].insert(b)
    }

    #[inline]
    pub fn successors(&self, w: usize) -> &WorldSet {
        &self.rows[w]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().map(move |b| (a, b)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(WorldSet::count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(WorldSet::is_empty)
    }

    fn check_dims(&self, other: &Relation) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    /// `x (self;other) y` iff some `z` has `x self z` and `z other y`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        self.check_dims(other)?;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = WorldSet::new(self.n);
                for z in row.iter() {
                    out.union_with(&other.rows[z]);
                }
                out
            })
            .collect();
        Ok(Relation { n: self.n, rows })
    }

    /// Reflexive-transitive closure.
    pub fn star(&self) -> Relation {
        let mut rows = self.rows.clone();
        for (w, row) in rows.iter_mut().enumerate() {
            row.insert(w);
        }
        // Warshall
        for k in 0..self.n {
            let via = rows[k].clone();
            for row in rows.iter_mut() {
                if row.contains(k) {
                    row.union_with(&via);
                }
            }
        }
        Relation { n: self.n, rows }
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.check_dims(other)?;
        Ok(Relation {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.union(b))
                .collect(),
        })
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.n == other.n
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.is_subset(b))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|w| self.rows[w].contains(w))
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_witness().is_none()
    }

    /// Some `(a, b, c)` with `a R b R c` but not `a R c`.
    pub fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        for (a, row) in self.rows.iter().enumerate() {
            for b in row.iter() {
                if let Some(c) = self.rows[b].difference(row).first() {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    /// Restriction to `keep`, renumbered so that new world `i` is old world `keep[i]`.
    pub fn restrict(&self, keep: &[usize]) -> Relation {
        let n = keep.len();
        let rows = keep
            .iter()
            .map(|&old| {
                WorldSet::from_indices(
                    n,
                    keep.iter()
                        .enumerate()
                        .filter(|&(_, &o)| self.rows[old].contains(o))
                        .map(|(i, _)| i),
                )
            })
            .collect();
        Relation { n, rows }
    }

    /// `{w | every successor of w is in target}`
    pub fn box_of(&self, target: &WorldSet) -> WorldSet {
        WorldSet::from_indices(
            self.n,
            (0..self.n).filter(|&w| self.rows[w].is_subset(target)),
        )
    }

    /// `{w | some successor of w is in target}`
    pub fn dia_of(&self, target: &WorldSet) -> WorldSet {
        WorldSet::from_indices(
            self.n,
            (0..self.n).filter(|&w| self.rows[w].intersects(target)),
        )
    }

    /// Forward image of a set.
    pub fn image(&self, from: &WorldSet) -> WorldSet {
        let mut out = WorldSet::new(self.n);
        for w in from.iter() {
            out.union_with(&self.rows[w]);
        }
        out
    }

    /// Everything reachable from `from` in zero or more steps.
    pub fn reach(&self, from: &WorldSet) -> WorldSet {
        let mut seen = from.clone();
        let mut frontier = from.clone();
        while !frontier.is_empty() {
            let next = self.image(&frontier).difference(&seen);
            seen.union_with(&next);
            frontier = next;
        }
        seen
    }
}

pub fn rel_compose(r: &Relation, s: &Relation) -> Result<Relation> {
    r.compose(s)
}

pub fn rel_star(r: &Relation) -> Relation {
    r.star()
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let r = rel(3, &[(0, 1), (1, 2), (2, 2)]);
        assert_eq!(Relation::identity(3).compose(&r).unwrap(), r);
        assert_eq!(
            rel(2, &[(0, 1)]).compose(&rel(2, &[(1, 0)])).unwrap(),
            rel(2, &[(0, 0)])
        );
        assert_eq!(r.compose(&Relation::empty(3)).unwrap(), Relation::empty(3));
        assert!(matches!(
            r.compose(&Relation::empty(2)),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }

    #[test]
    fn star_examples() {
        assert_eq!(Relation::empty(3).star(), Relation::identity(3));
        let chain = rel(3, &[(0, 1), (1, 2)]);
        let want = rel(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]);
        assert_eq!(chain.star(), want);
        assert_eq!(chain.star().star(), chain.star());
    }

    #[test]
    fn out_of_range_pairs_rejected() {
        assert!(matches!(
            Relation::from_pairs(2, [(0, 2)]),
            Err(Error::WorldOutOfRange {
                world: 2,
                worlds: 2
            })
        ));
    }

    #[test]
    fn restrict_renumbers() {
        let r = rel(3, &[(0, 2), (2, 1), (1, 1)]);
        assert_eq!(r.restrict(&[0, 2]), rel(2, &[(0, 1)]));
    }
}
