//! Finite groups given by their multiplication table.
//!
//! Elements are indices `0..order`; index 0 is always the identity. The
//! inverse table is computed once at construction and groups are immutable
//! afterwards.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeff::{Bit, Coefficient};
use crate::error::{Error, Result};
use crate::io;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    names: Option<Vec<String>>,
}

/// First violated group axiom found by [`check_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    EmptyGroup,
    Shape { row: usize, len: usize },
    EntryOutOfRange { g: usize, h: usize, value: usize },
    IdentityRow { h: usize, value: usize },
    IdentityColumn { g: usize, value: usize },
    RowNotPermutation { row: usize },
    ColumnNotPermutation { column: usize },
    NotAssociative { g: usize, h: usize, k: usize },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::EmptyGroup => write!(f, "order must be positive"),
            AxiomViolation::Shape { row, len } => {
                write!(f, "table row {row} has length {len}, expected the group order")
            }
            AxiomViolation::EntryOutOfRange { g, h, value } => {
                write!(f, "table[{g}][{h}] = {value} is not an element index")
            }
            AxiomViolation::IdentityRow { h, value } => write!(
                f,
                "identity must be at index 0: table[0][{h}] = {value}, expected {h}"
            ),
            AxiomViolation::IdentityColumn { g, value } => write!(
                f,
                "identity must be at index 0: table[{g}][0] = {value}, expected {g}"
            ),
            AxiomViolation::RowNotPermutation { row } => {
                write!(f, "row {row} is not a permutation")
            }
            AxiomViolation::ColumnNotPermutation { column } => {
                write!(f, "column {column} is not a permutation")
            }
            AxiomViolation::NotAssociative { g, h, k } => {
                write!(f, "associativity fails at (g,h,k) = ({g},{h},{k})")
            }
        }
    }
}

/// Checks every group axiom on a raw table and reports the first violation.
pub fn check_table(table: &[Vec<usize>]) -> std::result::Result<(), AxiomViolation> {
    let n = table.len();
    if n == 0 {
        return Err(AxiomViolation::EmptyGroup);
    }
    for (row, entries) in table.iter().enumerate() {
        if entries.len() != n {
            return Err(AxiomViolation::Shape { row, len: entries.len() });
        }
        for (h, &value) in entries.iter().enumerate() {
            if value >= n {
                return Err(AxiomViolation::EntryOutOfRange { g: row, h, value });
            }
        }
    }
    for h in 0..n {
        if table[0][h] != h {
            return Err(AxiomViolation::IdentityRow { h, value: table[0][h] });
        }
    }
    for g in 0..n {
        if table[g][0] != g {
            return Err(AxiomViolation::IdentityColumn { g, value: table[g][0] });
        }
    }
    let mut seen = vec![false; n];
    for row in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for &v in &table[row] {
            if std::mem::replace(&mut seen[v], true) {
                return Err(AxiomViolation::RowNotPermutation { row });
            }
        }
    }
    for column in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for row in table {
            if std::mem::replace(&mut seen[row[column]], true) {
                return Err(AxiomViolation::ColumnNotPermutation { column });
            }
        }
    }
    for g in 0..n {
        for h in 0..n {
            let gh = table[g][h];
            for k in 0..n {
                if table[gh][k] != table[g][table[h][k]] {
                    return Err(AxiomViolation::NotAssociative { g, h, k });
                }
            }
        }
    }
    Ok(())
}

/// Runs the axiom check on an existing group.
pub fn check_axioms(group: &FiniteGroup) -> std::result::Result<(), AxiomViolation> {
    check_table(&group.rows())
}

impl FiniteGroup {
    /// Builds a group from a table, rejecting anything that is not a group
    /// with identity at index 0.
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        check_table(&table).map_err(|v| Error::InvalidGroup(v.to_string()))?;
        let order = table.len();
        if let Some(names) = &names {
            if names.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "{} names given for a group of order {order}",
                    names.len()
                )));
            }
        }
        Ok(Self::from_checked(order, table.concat(), names))
    }

    fn from_checked(order: usize, table: Vec<usize>, names: Option<Vec<String>>) -> Self {
        let mut inverses = vec![0; order];
        for g in 0..order {
            inverses[g] = (0..order)
                .find(|&h| table[g * order + h] == 0)
                .expect("latin square has an inverse in every row");
        }
        FiniteGroup { order, table, inverses, names }
    }

    /// The cyclic group ℤ_n with `g·h = (g + h) mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cyclic group order must be at least 1"));
        }
        let table = (0..n).flat_map(|g| (0..n).map(move |h| (g + h) % n)).collect();
        let names = (0..n).map(|g| g.to_string()).collect();
        Ok(Self::from_checked(n, table, Some(names)))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("order 1 is valid")
    }

    /// Dihedral group of order `2n`: element `r^i s^j` has index `i + n*j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dihedral parameter must be at least 1"));
        }
        let order = 2 * n;
        let mut table = vec![0; order * order];
        for x in 0..order {
            let (i, j) = (x % n, x / n);
            for y in 0..order {
                let (k, l) = (y % n, y / n);
                // r^i s^j r^k s^l = r^(i ± k) s^(j+l)
                let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
                table[x * order + y] = rot + n * ((j + l) % 2);
            }
        }
        let names = (0..order)
            .map(|x| match (x % n, x / n) {
                (0, 0) => "e".to_string(),
                (i, 0) => format!("r{i}"),
                (0, _) => "s".to_string(),
                (i, _) => format!("r{i}s"),
            })
            .collect();
        Ok(Self::from_checked(order, table, Some(names)))
    }

    /// `G × H` with `(g,h) ↦ g·|H| + h`.
    pub fn direct_product(left: &FiniteGroup, right: &FiniteGroup) -> Self {
        let (n, m) = (left.order, right.order);
        let order = n * m;
        let mut table = vec![0; order * order];
        for x in 0..order {
            for y in 0..order {
                let g = left.mul(x / m, y / m);
                let h = right.mul(x % m, y % m);
                table[x * order + y] = g * m + h;
            }
        }
        let names = match (&left.names, &right.names) {
            (Some(l), Some(r)) => Some(
                (0..order)
                    .map(|x| format!("({},{})", l[x / m], r[x % m]))
                    .collect(),
            ),
            _ => None,
        };
        Self::from_checked(order, table, names)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// Checked inverse lookup.
    pub fn inverse_of(&self, g: usize) -> Result<usize> {
        if g >= self.order {
            return Err(Error::invalid(format!(
                "element {g} out of range for group of order {}",
                self.order
            )));
        }
        Ok(self.inverses[g])
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// A generating set found greedily: each new generator is the smallest
    /// element outside the subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[0] = true;
        while let Some(next) = (0..self.order).find(|&g| !inside[g]) {
            gens.push(next);
            inside = self.closure(&gens);
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    frontier.push(y);
                }
            }
        }
        inside
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("table", &self.rows())
            .finish()
    }
}

/// A homomorphism `G → ℤ₂`, stored by its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z2Hom {
    values: Vec<Bit>,
}

impl Z2Hom {
    pub fn zero(order: usize) -> Self {
        Z2Hom { values: vec![Bit::ZERO; order] }
    }

    /// Wraps a value array after checking the homomorphism law on `group`.
    pub fn new(group: &FiniteGroup, values: Vec<Bit>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::invalid(format!(
                "homomorphism has {} values, group order is {}",
                values.len(),
                group.order()
            )));
        }
        if !is_z2_hom(group, &values) {
            return Err(Error::invalid("values do not define a homomorphism to Z2"));
        }
        Ok(Z2Hom { values })
    }

    #[inline]
    pub fn at(&self, g: usize) -> Bit {
        self.values[g]
    }

    pub fn values(&self) -> &[Bit] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|b| b.is_zero())
    }
}

fn is_z2_hom(group: &FiniteGroup, values: &[Bit]) -> bool {
    let n = group.order();
    (0..n).all(|g| (0..n).all(|h| values[group.mul(g, h)] == values[g] + values[h]))
}

/// Every homomorphism `G → ℤ₂`, sorted lexicographically by value array.
///
/// Groups of order at most 16 are handled by testing every bit array;
/// larger ones by assigning images to a generating set and propagating.
pub fn all_z2_homs(group: &FiniteGroup) -> Vec<Z2Hom> {
    let n = group.order();
    let mut homs = if n <= 16 {
        (0u32..1 << n)
            .map(|mask| (0..n).map(|g| Bit::from(mask >> (n - 1 - g) & 1 == 1)).collect::<Vec<_>>())
            .filter(|v| is_z2_hom(group, v))
            .map(|values| Z2Hom { values })
            .collect::<Vec<_>>()
    } else {
        let gens = group.generators();
        (0u64..1 << gens.len())
            .filter_map(|mask| extend_from_generators(group, &gens, mask))
            .map(|values| Z2Hom { values })
            .collect()
    };
    homs.sort();
    homs.dedup();
    homs
}

fn extend_from_generators(group: &FiniteGroup, gens: &[usize], mask: u64) -> Option<Vec<Bit>> {
    let n = group.order();
    let mut values: Vec<Option<Bit>> = vec![None; n];
    values[0] = Some(Bit::ZERO);
    let mut frontier = vec![0];
    while let Some(x) = frontier.pop() {
        let vx = values[x].expect("frontier elements are assigned");
        for (i, &s) in gens.iter().enumerate() {
            let y = group.mul(x, s);
            let vy = vx + Bit::from(mask >> i & 1 == 1);
            match values[y] {
                None => {
                    values[y] = Some(vy);
                    frontier.push(y);
                }
                Some(prev) if prev != vy => return None,
                Some(_) => {}
            }
        }
    }
    let values: Vec<Bit> = values.into_iter().map(|v| v.expect("generators span")).collect();
    is_z2_hom(group, &values).then_some(values)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl GroupFile {
    pub(crate) fn into_group(self) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            return Err(Error::InvalidGroup(format!(
                "order is {} but the table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        FiniteGroup::from_table(self.table, self.names)
    }

    pub(crate) fn from_group(group: &FiniteGroup) -> Self {
        GroupFile { order: group.order, table: group.rows(), names: group.names.clone() }
    }
}

/// Parses a group file (`{"order": n, "table": [[...]], "names": [...]}`).
pub fn load_group(text: &str) -> Result<FiniteGroup> {
    io::parse_json::<GroupFile>(text)?.into_group()
}

/// Canonical JSON text of a group, the inverse of [`load_group`].
pub fn serialize_group(group: &FiniteGroup) -> String {
    io::to_canonical_json(&GroupFile::from_group(group))
}
