use std::collections::HashMap;

use super::field::{FieldSpec, Scalar};
use super::matrix::Matrix;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(field: FieldSpec, index: usize) -> Self {
        SparseVec { entries: vec![(index, field.one())] }
    }

    /// Build from unsorted, possibly repeated entries; duplicates are summed.
    pub fn from_entries(field: FieldSpec, mut raw: Vec<(usize, Scalar)>) -> Self {
        raw.sort_by_key(|e| e.0);
        let mut entries: Vec<(usize, Scalar)> = Vec::with_capacity(raw.len());
        for (i, c) in raw {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc = field.add(acc, &c),
                _ => entries.push((i, c)),
            }
        }
        entries.retain(|(_, c)| !field.is_zero(c));
        SparseVec { entries }
    }

    pub fn from_dense(field: FieldSpec, dense: &[Scalar]) -> Self {
        let entries =
            dense.iter().enumerate().filter(|(_, c)| !field.is_zero(c)).map(|(i, c)| (i, c.clone())).collect();
        SparseVec { entries }
    }

    pub fn to_dense(&self, field: FieldSpec, len: usize) -> Vec<Scalar> {
        let mut v = vec![field.zero(); len];
        for (i, c) in &self.entries {
            v[*i] = c.clone();
        }
        v
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.entries.last()
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&index, |e| e.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, field: FieldSpec, c: &Scalar) -> SparseVec {
        if field.is_zero(c) {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, field.mul(v, c))).collect() }
    }

    /// `self + c · other`.
    pub fn axpy(&self, field: FieldSpec, c: &Scalar, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0);
            let ib = other.entries.get(b).map(|e| e.0);
            match (ia, ib) {
                (Some(x), Some(y)) if x == y => {
                    let v = field.add(&self.entries[a].1, &field.mul(c, &other.entries[b].1));
                    if !field.is_zero(&v) {
                        out.push((x, v));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (Some(_), None) => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (_, Some(y)) => {
                    let v = field.mul(c, &other.entries[b].1);
                    if !field.is_zero(&v) {
                        out.push((y, v));
                    }
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec { entries: out }
    }

    /// Keep only indices below `bound`.
    pub fn truncate_below(&self, bound: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().filter(|e| e.0 < bound).cloned().collect() }
    }

    /// Re-index entries through `map`; entries mapped to `None` are dropped.
    pub fn remap(&self, map: impl Fn(usize) -> Option<usize>) -> SparseVec {
        let mut entries: Vec<(usize, Scalar)> =
            self.entries.iter().filter_map(|(i, c)| map(*i).map(|j| (j, c.clone()))).collect();
        entries.sort_by_key(|e| e.0);
        SparseVec { entries }
    }
}

/// Incrementally built echelon basis of a subspace. The pivot of a row is its
/// *largest* index, so with columns sorted ascending by a term order the
/// pivots are leading terms. Rows are stored monic.
///
/// With tracking enabled every inserted vector carries its expression in the
/// inserted inputs, and inputs that reduce to zero yield relations.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    rows: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
    tracking: bool,
    inserted: usize,
    relations: Vec<SparseVec>,
}

impl Echelon {
    pub fn new(field: FieldSpec) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            combos: Vec::new(),
            pivot_row: HashMap::new(),
            tracking: false,
            inserted: 0,
            relations: Vec::new(),
        }
    }

    pub fn with_tracking(field: FieldSpec) -> Self {
        Echelon { tracking: true, ..Self::new(field) }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    /// Relations found so far among the inputs (tracking mode only), each
    /// expressed over input indices `0..inserted`.
    pub fn relations(&self) -> &[SparseVec] {
        &self.relations
    }

    pub fn take_relations(&mut self) -> Vec<SparseVec> {
        std::mem::take(&mut self.relations)
    }

    /// Eliminate every entry of `v` that sits on a pivot. The result has no
    /// pivot entries, so it is the canonical representative modulo the span.
    pub fn reduce_full(&self, v: &SparseVec) -> SparseVec {
        self.reduce_tracked(v.clone(), None).0
    }

    fn reduce_tracked(&self, mut v: SparseVec, mut combo: Option<SparseVec>) -> (SparseVec, Option<SparseVec>) {
        let f = self.field;
        // Walk from the top index downward; row subtraction only touches
        // indices at or below its pivot, so the cursor never revisits.
        let mut cursor = usize::MAX;
        loop {
            let next = v.entries.iter().rev().find(|(i, _)| *i < cursor && self.pivot_row.contains_key(i)).cloned();
            let Some((col, c)) = next else { break };
            let r = self.pivot_row[&col];
            let neg = f.neg(&c);
            v = v.axpy(f, &neg, &self.rows[r]);
            if let Some(cb) = combo.as_mut() {
                *cb = cb.axpy(f, &neg, &self.combos[r]);
            }
            cursor = col;
        }
        (v, combo)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_full(v).is_zero()
    }

    /// Insert `v`. Returns `true` when the span grew. In tracking mode a
    /// dependent input records a relation.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let f = self.field;
        let idx = self.inserted;
        self.inserted += 1;
        let combo = self.tracking.then(|| SparseVec::unit(f, idx));
        let (r, combo) = self.reduce_tracked(v.clone(), combo);
        match r.leading().cloned() {
            None => {
                if let Some(cb) = combo {
                    self.relations.push(cb);
                }
                false
            }
            Some((col, lead)) => {
                let inv = f.inv(&lead);
                self.pivot_row.insert(col, self.rows.len());
                self.rows.push(r.scale(f, &inv));
                if let Some(cb) = combo {
                    self.combos.push(cb.scale(f, &inv));
                }
                true
            }
        }
    }

    /// Fully inter-reduced basis sorted by pivot; canonical for the subspace.
    pub fn reduced_basis(&self) -> Vec<SparseVec> {
        let mut order: Vec<usize> = self.pivot_row.keys().copied().collect();
        order.sort_unstable();
        order
            .iter()
            .map(|p| {
                let row = &self.rows[self.pivot_row[p]];
                // Reduce everything below the pivot.
                let lead = row.leading().cloned().unwrap();
                let tail = SparseVec { entries: row.entries[..row.entries.len() - 1].to_vec() };
                let mut out = self.reduce_full(&tail);
                out.entries.push(lead);
                out
            })
            .collect()
    }

    /// Canonical dense RREF (leftmost-pivot convention) of the span.
    pub fn to_rref_matrix(&self, cols: usize) -> Matrix {
        let rows = self.rows.iter().map(|r| r.to_dense(self.field, cols)).collect();
        Matrix::from_rows(self.field, cols, rows).row_space()
    }
}
