use std::fmt;

use crate::error::{Error, Result};

/// Largest order whose Cayley table is checked for associativity triple by triple.
pub const ASSOCIATIVITY_CHECK_MAX: usize = 256;
/// Largest `n` for which `S_n` is built as an explicit table.
pub const SYMMETRIC_TABLE_MAX: usize = 6;

/// A finite group given by its Cayley table, `table[g][h] = g·h`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

fn is_permutation(values: impl Iterator<Item = usize>, order: usize) -> bool {
    let mut seen = vec![false; order];
    for v in values {
        if v >= order || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

impl FiniteGroup {
    /// Validates a Cayley table: Latin square, two-sided identity, and
    /// associativity. Errors carry a witness.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("Cayley table is empty".into()));
        }
        if order > ASSOCIATIVITY_CHECK_MAX {
            return Err(Error::InvalidGroup(format!(
                "Cayley tables are validated up to order {ASSOCIATIVITY_CHECK_MAX}, got {order}"
            )));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!("row {g} has {} entries, expected {order}", row.len())));
            }
            if !is_permutation(row.iter().copied(), order) {
                return Err(Error::InvalidGroup(format!("row {g} is not a permutation of 0..{order}")));
            }
        }
        for h in 0..order {
            if !is_permutation(table.iter().map(|row| row[h]), order) {
                return Err(Error::InvalidGroup(format!("column {h} is not a permutation of 0..{order}")));
            }
        }
        let group = Self::assemble(name.into(), table)?;
        for a in 0..order {
            for b in 0..order {
                let ab = group.table[a][b];
                for c in 0..order {
                    if group.table[ab][c] != group.table[a][group.table[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails for (a, b, c) = ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(group)
    }

    /// Finds identity and inverses of a Latin-square table.
    fn assemble(name: String, table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity element".into()))?;
        let mut inverse = vec![0; order];
        for (g, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..order)
                .find(|&h| table[g][h] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            if table[*inv][g] != identity {
                return Err(Error::InvalidGroup(format!("element {g} has no two-sided inverse")));
            }
        }
        Ok(FiniteGroup { name, table, identity, inverse })
    }

    /// Group of permutations closed under composition, with
    /// `(g·h)(x) = g(h(x))`. Element `i` is `perms[i]`.
    pub fn from_permutations(name: impl Into<String>, perms: Vec<Vec<usize>>) -> Result<Self> {
        let index: std::collections::HashMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        if index.len() != perms.len() {
            return Err(Error::InvalidGroup("duplicate permutations".into()));
        }
        let mut table = vec![vec![0; perms.len()]; perms.len()];
        for (g, pg) in perms.iter().enumerate() {
            for (h, ph) in perms.iter().enumerate() {
                let composed: Vec<usize> = ph.iter().map(|&x| pg[x]).collect();
                table[g][h] = *index
                    .get(composed.as_slice())
                    .ok_or_else(|| Error::InvalidGroup(format!("set is not closed: {g}·{h} missing")))?;
            }
        }
        // composition of maps is associative, so the Latin-square checks suffice
        Self::assemble(name.into(), table)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("cyclic group needs n >= 1"));
        }
        let table = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        Self::assemble(format!("C{n}"), table)
    }

    /// Dihedral group of order `2n`; element `k + n·f` is `r^k s^f`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("dihedral group needs n >= 1"));
        }
        let order = 2 * n;
        let table = (0..order)
            .map(|g| {
                let (a, f) = (g % n, g / n);
                (0..order)
                    .map(|h| {
                        let (b, e) = (h % n, h / n);
                        // r^a s^f r^b s^e = r^{a ± b} s^{f+e}
                        let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
                        k + n * ((f + e) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::assemble(format!("D{n}"), table)
    }

    /// Symmetric group on `n ≤ 6` points. `S_3` uses the element order
    /// `(), (2 3), (1 2), (1 2 3), (1 3 2), (1 3)`; other `n` list
    /// permutations lexicographically.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > SYMMETRIC_TABLE_MAX {
            return Err(Error::validation(format!("symmetric group tables need 1 <= n <= {SYMMETRIC_TABLE_MAX}, got {n}")));
        }
        let perms = if n == 3 {
            vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]
        } else {
            lexicographic_permutations(n)
        };
        Self::from_permutations(format!("S{n}"), perms)
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`; element `u + 4s` is `(−1)^s` times unit `u` of `1, i, j, k`.
    pub fn quaternion() -> Self {
        // unit products: (result unit, sign flip)
        const UNITS: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        let table = (0..8)
            .map(|g| {
                (0..8)
                    .map(|h| {
                        let (u, s) = UNITS[g % 4][h % 4];
                        u + 4 * ((s + g / 4 + h / 4) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::assemble("Q8".into(), table).expect("quaternion table is a group")
    }

    /// Parses the text format: the order on the first line, then `order`
    /// lines of `order` space-separated element indices.
    pub fn parse_table(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::InvalidGroup("empty Cayley table file".into()))?;
        let order: usize = header
            .parse()
            .map_err(|_| Error::InvalidGroup(format!("first line must be the group order, got '{header}'")))?;
        let mut table = Vec::with_capacity(order);
        for (r, line) in lines.enumerate() {
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::InvalidGroup(format!("row {r}: '{t}' is not an index"))))
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        if table.len() != order {
            return Err(Error::InvalidGroup(format!("expected {order} rows, found {}", table.len())));
        }
        Self::from_table(name, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|g| (0..g).all(|h| self.table[g][h] == self.table[h][g]))
    }

    /// Orbits of `h ↦ g h g⁻¹`, each sorted, ordered by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let order = self.order();
        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for h in 0..order {
            if class_of[h] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..order).map(|g| self.mul(self.mul(g, h), self.inverse[g])).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = classes.len();
            }
            classes.push(class);
        }
        classes
    }

    pub fn conjugacy_class_count(&self) -> usize {
        self.conjugacy_classes().len()
    }
}

fn lexicographic_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}
