//! Teichmüller lifts and Gauss sums
//! `G(k) = sum_{a != 0} teich(a)^(-k) zeta_p^(Tr a)`, with the conventions
//! `G(0) = q - 1` and `G(q-1) = -q`.

use std::collections::HashMap;
use std::io::{self, Write};
use std::sync::Mutex;

use num_integer::Integer;
use serde::Serialize;

use super::tower::{Tower, TowerElem};
use super::PadicError;
use crate::ff::{FieldCtx, FqElem};

/// Power tables are kept when q is at most this.
const POWER_TABLE_LIMIT: u64 = 1 << 16;

/// Teichmüller lift of a field element: the (q-1)-st root of unity in W
/// reducing to `a` (zero maps to zero).
pub fn teich(tower: &Tower, field: &FieldCtx, a: FqElem) -> TowerElem {
    if a.is_zero() {
        return tower.zero();
    }
    tower.from_unramified(&teich_unramified(tower, field, a))
}

fn teich_unramified(tower: &Tower, field: &FieldCtx, a: FqElem) -> Vec<u128> {
    let q = field.q() as u128;
    let mut x = tower.digit_lift(field, a);
    for _ in 0..=tower.precision() {
        let y = tower.unr_pow(&x, q);
        if y == x {
            break;
        }
        x = y;
    }
    x
}

/// Teichmüller lifts via powers of the lifted generator.
pub struct TeichTable<'a> {
    tower: &'a Tower,
    field: &'a FieldCtx,
    omega: Vec<u128>,
    powers: Option<Vec<Vec<u128>>>,
}

impl<'a> TeichTable<'a> {
    pub fn new(tower: &'a Tower, field: &'a FieldCtx) -> Self {
        let omega = teich_unramified(tower, field, field.generator());
        let powers = (field.q() <= POWER_TABLE_LIMIT).then(|| {
            let mut v = Vec::with_capacity(field.q() as usize - 1);
            let mut cur = tower.unramified_part(&tower.one()).to_vec();
            for _ in 0..field.q() - 1 {
                v.push(cur.clone());
                cur = tower.unr_mul(&cur, &omega);
            }
            v
        });
        TeichTable {
            tower,
            field,
            omega,
            powers,
        }
    }

    /// `teich(generator)^j` as a W-vector.
    pub fn omega_pow(&self, j: u64) -> Vec<u128> {
        let j = j % (self.field.q() - 1);
        match &self.powers {
            Some(p) => p[j as usize].clone(),
            None => self.tower.unr_pow(&self.omega, j as u128),
        }
    }

    pub fn lift(&self, a: FqElem) -> TowerElem {
        match self.field.dlog(a) {
            Ok(j) => self.tower.from_unramified(&self.omega_pow(j)),
            Err(_) => self.tower.zero(),
        }
    }

    pub fn tower(&self) -> &Tower {
        self.tower
    }

    pub fn field(&self) -> &FieldCtx {
        self.field
    }
}

/// Lazily evaluated Gauss sums, cached per Frobenius orbit of k.
pub struct GaussSums<'a> {
    teich: TeichTable<'a>,
    cache: Mutex<HashMap<u64, TowerElem>>,
}

impl<'a> GaussSums<'a> {
    pub fn new(tower: &'a Tower, field: &'a FieldCtx) -> Self {
        GaussSums {
            teich: TeichTable::new(tower, field),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn tower(&self) -> &Tower {
        self.teich.tower
    }

    pub fn field(&self) -> &FieldCtx {
        self.teich.field
    }

    pub fn teich(&self) -> &TeichTable<'a> {
        &self.teich
    }

    /// `sum_{k=0}^{q-1} G(k) teich(a)^k / (q-1)`, which reproduces
    /// `zeta_p^(Tr a)`.
    pub fn interpolate(&self, a: FqElem) -> Result<TowerElem, PadicError> {
        let tower = self.tower();
        let q = self.field().q();
        let inv = tower
            .ring()
            .inv(q as u128 - 1)
            .expect("q - 1 is a p-adic unit");
        if a.is_zero() {
            return Ok(tower.scale(&self.get(0)?, inv));
        }
        let j = self.field().dlog(a).expect("nonzero");
        let mut acc = tower.zero();
        for k in 0..q {
            let w = tower.from_unramified(&self.teich.omega_pow(j * k));
            tower.add_assign(&mut acc, &tower.mul(&self.get(k)?, &w));
        }
        Ok(tower.scale(&acc, inv))
    }

    pub fn get(&self, k: u64) -> Result<TowerElem, PadicError> {
        let field = self.field();
        let tower = self.tower();
        let q = field.q();
        if k > q - 1 {
            return Err(PadicError::IndexOutOfRange { k, max: q - 1 });
        }
        if k == 0 {
            return Ok(tower.from_int(q as i128 - 1));
        }
        if k == q - 1 {
            return Ok(tower.from_int(-(q as i128)));
        }
        let rep = orbit_representative(k, field.p(), q - 1);
        if let Some(g) = self.cache.lock().expect("cache lock").get(&rep) {
            return Ok(g.clone());
        }
        let g = self.compute(rep);
        self.cache
            .lock()
            .expect("cache lock")
            .insert(rep, g.clone());
        Ok(g)
    }

    fn compute(&self, k: u64) -> TowerElem {
        let field = self.field();
        let tower = self.tower();
        let ring = tower.ring();
        let order = field.q() - 1;
        let p = field.p() as usize;
        let d = k.gcd(&order);
        let len = order / d;
        let step = k / d;
        // hist[t][m] counts j with Tr(g^j) = t and -j*step = m mod len
        let mut hist = vec![0u64; p * len as usize];
        for j in 0..order {
            let m = (len - (j % len) * step % len) % len;
            let t = field.trace_of_exp(j) as usize;
            hist[t * len as usize + m as usize] += 1;
        }
        let r = tower.width();
        let root_pows: Vec<Vec<u128>> = {
            let mut out = Vec::with_capacity(len as usize);
            if self.teich.powers.is_some() {
                for m in 0..len {
                    out.push(self.teich.omega_pow(d * m));
                }
            } else {
                let root = self.teich.omega_pow(d);
                let mut cur = tower.unramified_part(&tower.one()).to_vec();
                for _ in 0..len {
                    out.push(cur.clone());
                    cur = tower.unr_mul(&cur, &root);
                }
            }
            out
        };
        let mut total = tower.zero();
        for t in 0..p {
            let mut inner = vec![0u128; r];
            for (m, pow) in root_pows.iter().enumerate() {
                let c = hist[t * len as usize + m];
                if c == 0 {
                    continue;
                }
                let c = ring.from_u128(c as u128);
                for (dst, &v) in inner.iter_mut().zip(pow) {
                    *dst = ring.add(*dst, ring.mul(c, v));
                }
            }
            let zt = tower.zeta_pow(t as u64);
            let inner_elem = tower.from_unramified(&inner);
            tower.add_assign(&mut total, &tower.mul(zt, &inner_elem));
        }
        total
    }
}

/// Smallest element of `{k p^i mod order}`.
fn orbit_representative(k: u64, p: u64, order: u64) -> u64 {
    let mut best = k;
    let mut cur = k;
    loop {
        cur = ((cur as u128 * p as u128) % order as u128) as u64;
        if cur == k {
            return best;
        }
        best = best.min(cur);
    }
}

#[derive(Serialize)]
struct TableHeader<'a> {
    schema: &'static str,
    p: u64,
    r: u32,
    precision: u32,
    modulus: &'a [u64],
    rows: usize,
    layout: &'static str,
}

#[derive(Serialize)]
struct TableRow {
    k: u64,
    coords: Vec<String>,
}

/// Write one JSON header line followed by one line per k.
pub fn write_gauss_table<W: Write>(
    out: &mut W,
    sums: &GaussSums<'_>,
    ks: impl IntoIterator<Item = u64>,
) -> io::Result<()> {
    let field = sums.field();
    let tower = sums.tower();
    let header = TableHeader {
        schema: "gauss-table/1",
        p: field.p(),
        r: field.r(),
        precision: tower.precision(),
        modulus: field.modulus(),
        rows: tower.rows(),
        layout: "pi-degree-major, then basis index",
    };
    serde_json::to_writer(&mut *out, &header)?;
    writeln!(out)?;
    for k in ks {
        let g = sums
            .get(k)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
        let row = TableRow {
            k,
            coords: g.coords().iter().map(|c| c.to_string()).collect(),
        };
        serde_json::to_writer(&mut *out, &row)?;
        writeln!(out)?;
    }
    Ok(())
}
