//! Solutions of the exponent congruences `M k = 0` and `N k = 0`
//! (mod q-1), enumerated structurally instead of by scanning `q^(n+2)`
//! tuples.

use num_integer::Integer;
use serde::Serialize;

/// Which exponent matrix a solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// The `(n+2) x (n+2)` matrix of the Dwork pencil.
    Pencil,
    /// The `(n+1) x (n+2)` matrix of the torus mirror.
    Mirror,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionClass {
    Zero,
    Trivial,
    Diagonal,
    Admissible,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionVector {
    pub k: Vec<u64>,
    /// Number of nonzero entries of the matrix-vector product over Z.
    pub support: usize,
    pub class: SolutionClass,
}

impl SolutionVector {
    pub fn last(&self) -> u64 {
        *self.k.last().expect("nonempty")
    }

    /// The solution with every coordinate multiplied by `p^i`, each
    /// reduced by the convention: 0 stays 0, positive multiples of q-1
    /// become q-1, everything else goes to its residue.
    pub fn rotate(&self, factor: u64, q: u64) -> Vec<u64> {
        self.k.iter().map(|&x| rotate_coord(x, factor, q)).collect()
    }
}

pub(crate) fn rotate_coord(x: u64, factor: u64, q: u64) -> u64 {
    let order = q - 1;
    if x == 0 {
        return 0;
    }
    let m = (x as u128 * factor as u128 % order as u128) as u64;
    if m == 0 {
        order
    } else {
        m
    }
}

/// Entries of `M k` over the integers.
pub fn pencil_product(n: usize, k: &[u64]) -> Vec<u128> {
    let last = k[n + 1] as u128;
    let mut out = Vec::with_capacity(n + 2);
    out.push(k.iter().map(|&x| x as u128).sum());
    out.extend(k[..=n].iter().map(|&x| (n as u128 + 1) * x as u128 + last));
    out
}

/// Entries of `N k` over the integers.
pub fn mirror_product(n: usize, k: &[u64]) -> Vec<i128> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(k.iter().map(|&x| x as i128).sum());
    out.extend(k[..n].iter().map(|&x| x as i128 - k[n] as i128));
    out
}

/// Lifts of a residue mod q-1 into `[0, q-1]`: 0 lifts to both 0 and q-1.
fn lift_values(residue: u64, q: u64) -> Vec<u64> {
    if residue == 0 {
        vec![0, q - 1]
    } else {
        vec![residue]
    }
}

/// Precedence: zero, trivial, diagonal, admissible, other.
pub fn classify(n: usize, q: u64, k: &[u64], support: usize) -> SolutionClass {
    if k.iter().all(|&x| x == 0) {
        return SolutionClass::Zero;
    }
    if k.iter().all(|&x| x == 0 || x == q - 1) {
        return SolutionClass::Trivial;
    }
    let head = &k[..=n];
    if head.iter().all(|&x| x == head[0]) && head[0] > 0 && head[0] < q - 1 {
        return SolutionClass::Diagonal;
    }
    if support == n + 2 && head.iter().any(|&x| x != head[0]) {
        return SolutionClass::Admissible;
    }
    SolutionClass::Other
}

/// The admissibility predicate on its own: full support and the first
/// n+1 coordinates not all equal.
pub fn is_admissible(n: usize, k: &[u64], support: usize) -> bool {
    support == n + 2 && k[..=n].iter().any(|&x| x != k[0])
}

/// All solutions of `M k = 0 (mod q-1)` with entries in `[0, q-1]`, in
/// lexicographic order of `(k_{n+2}, k_1, ..., k_{n+1})`. With
/// `last_zero_only` the last coordinate is pinned to 0.
pub fn pencil_solutions(n: usize, q: u64, last_zero_only: bool) -> Vec<SolutionVector> {
    let order = q - 1;
    let lasts: Vec<u64> = if last_zero_only {
        vec![0]
    } else {
        (0..q).collect()
    };
    let mut out = Vec::new();
    for last in lasts {
        let rhs = (order - last % order) % order;
        let residues = residues_solving(n as u64 + 1, rhs, order);
        if residues.is_empty() {
            continue;
        }
        let mut values: Vec<u64> = residues.iter().flat_map(|&c| lift_values(c, q)).collect();
        values.sort_unstable();
        values.dedup();
        let mut current = vec![0u64; n + 1];
        for_each_tuple(&values, n + 1, &mut current, &mut |head| {
            let sum: u128 = head.iter().map(|&x| x as u128).sum::<u128>() + last as u128;
            if !sum.is_multiple_of(order as u128) {
                return;
            }
            let mut k = head.to_vec();
            k.push(last);
            let support = pencil_product(n, &k).iter().filter(|&&v| v != 0).count();
            let class = classify(n, q, &k, support);
            out.push(SolutionVector { k, support, class });
        });
    }
    out
}

/// All solutions of `N k = 0 (mod q-1)`, ordered like [`pencil_solutions`].
pub fn mirror_solutions(n: usize, q: u64, last_zero_only: bool) -> Vec<SolutionVector> {
    let order = q - 1;
    let mut out = Vec::new();
    let lasts: Vec<u64> = if last_zero_only {
        vec![0]
    } else {
        (0..q).collect()
    };
    for last in lasts {
        let mut heads = Vec::new();
        let rhs = (order - last % order) % order;
        for c in residues_solving(n as u64 + 1, rhs, order) {
            let values = lift_values(c, q);
            let mut current = vec![0u64; n + 1];
            for_each_tuple(&values, n + 1, &mut current, &mut |head| {
                heads.push(head.to_vec())
            });
        }
        heads.sort();
        for head in heads {
            let mut k = head;
            k.push(last);
            let support = mirror_product(n, &k).iter().filter(|&&v| v != 0).count();
            let class = classify(n, q, &k, support);
            out.push(SolutionVector { k, support, class });
        }
    }
    out
}

/// Residues x mod `order` with `a x = rhs`, in increasing order.
fn residues_solving(a: u64, rhs: u64, order: u64) -> Vec<u64> {
    let g = a.gcd(&order);
    if !rhs.is_multiple_of(g) {
        return Vec::new();
    }
    let step = order / g;
    let base = if step == 1 {
        0
    } else {
        let inv = mod_inverse((a / g) % step, step).expect("coprime after dividing by gcd");
        ((rhs / g) as u128 * inv as u128 % step as u128) as u64
    };
    let mut out: Vec<u64> = (0..g).map(|t| base + t * step).collect();
    out.sort_unstable();
    out
}

fn for_each_tuple<F: FnMut(&[u64])>(values: &[u64], len: usize, cur: &mut Vec<u64>, f: &mut F) {
    fn rec<F: FnMut(&[u64])>(values: &[u64], pos: usize, cur: &mut Vec<u64>, f: &mut F) {
        if pos == cur.len() {
            f(cur);
            return;
        }
        for &v in values {
            cur[pos] = v;
            rec(values, pos + 1, cur, f);
        }
    }
    cur.resize(len, 0);
    rec(values, 0, cur, f);
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}
