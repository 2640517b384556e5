//! The projective line over Z/q for prime q, Heilbronn matrices and
//! continued-fraction expansions of cusps.

use std::sync::OnceLock;

use crate::numkernel::mod_inverse;

/// Manin symbols `(c:d)` in `P^1(Z/q)`: index `d` stands for `(1:d)` and
/// index `q` for `(0:1)`.
#[derive(Debug, Clone)]
pub struct P1 {
    q: u64,
    inv: Vec<u64>,
    table: OnceLock<Vec<u32>>,
}

impl P1 {
    pub fn new(q: u64) -> Self {
        let mut inv = vec![0; q as usize];
        for (a, slot) in inv.iter_mut().enumerate().skip(1) {
            *slot = mod_inverse(a as i64, q as i64).expect("q prime") as u64;
        }
        P1 {
            q,
            inv,
            table: OnceLock::new(),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.q as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of `(c:d)`; `c, d` are arbitrary integers not both divisible by `q`.
    #[inline]
    pub fn index(&self, c: i64, d: i64) -> usize {
        let q = self.q as i64;
        let c = c.rem_euclid(q) as u64;
        let d = d.rem_euclid(q) as u64;
        self.index_reduced(c, d)
    }

    #[inline]
    pub(crate) fn index_reduced(&self, c: u64, d: u64) -> usize {
        if c == 0 {
            debug_assert!(d != 0);
            self.q as usize
        } else {
            (d * self.inv[c as usize] % self.q) as usize
        }
    }

    /// Normalized representative `(c, d)` of index `i`.
    pub fn symbol(&self, i: usize) -> (i64, i64) {
        if i == self.q as usize {
            (0, 1)
        } else {
            (1, i as i64)
        }
    }

    /// `(c:d) -> (d:-c)`, right action of `[0,-1;1,0]`.
    pub fn apply_s(&self, i: usize) -> usize {
        let (c, d) = self.symbol(i);
        self.index(d, -c)
    }

    /// `(c:d) -> (d:-c-d)`, right action of `[0,-1;1,-1]`.
    pub fn apply_t(&self, i: usize) -> usize {
        let (c, d) = self.symbol(i);
        self.index(d, -c - d)
    }

    /// `(c:d) -> (-c:d)`.
    pub fn apply_star(&self, i: usize) -> usize {
        let (c, d) = self.symbol(i);
        self.index(-c, d)
    }

    /// Cusp class of the endpoints `{b/d, a/c}` of a symbol: returns
    /// `(class(c), class(d))` with `true` meaning the cusp `infinity`.
    pub fn boundary_classes(&self, i: usize) -> (bool, bool) {
        let (c, d) = self.symbol(i);
        let q = self.q as i64;
        (c.rem_euclid(q) == 0, d.rem_euclid(q) == 0)
    }

    /// Calls `f(index)` for the image of `(u:v)` under every Heilbronn
    /// matrix of determinant `p` (Cremona's set). Together these give the
    /// Hecke operator `T_p` for `p != q`.
    pub fn for_each_heilbronn_image(&self, p: u64, (u, v): (i64, i64), mut f: impl FnMut(usize)) {
        let q = self.q as i64;
        let u = u.rem_euclid(q);
        let v = v.rem_euclid(q);
        let modq = |x: i64| x.rem_euclid(q) as u64;
        if p == 2 {
            for [a, b, c, d] in [[1, 0, 0, 2], [2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]] {
                f(self.index_reduced(modq(u * a + v * c), modq(u * b + v * d)));
            }
            return;
        }
        let pi = p as i64;
        let pm = pi % q;
        f(self.index_reduced(modq(u), modq(v * pm)));
        let half = (pi - 1) / 2;
        // off is a multiple of q above p; (p + off) q < 2^32 keeps every
        // intermediate inside the fast reducer
        let off = (pi / q + 1) * q;
        let fast = (pi + off) * q < 1 << 32 && self.q < 1 << 10;
        if fast {
            let red = FastMod::new(self.q as u32);
            let table = self.index_table();
            let qq = self.q as usize;
            let qu = self.q as u32;
            // Independent chains (one per r) advance in lockstep so their
            // divisions overlap; a finished lane picks up the next r.
            const LANES: usize = 16;
            let u0 = modq(u * pm) as u32;
            let mut next_r = -half;
            let mut st = [(0i64, 0i64, 0u32, 0u32); LANES];
            let mut live = 0usize;
            let start = |r: i64, f: &mut dyn FnMut(usize)| {
                let bv = modq(v - u * (r % q)) as u32;
                f(table[u0 as usize * qq + bv as usize] as usize);
                (-pi, r, u0, bv)
            };
            for lane in st.iter_mut() {
                if next_r > half {
                    break;
                }
                *lane = start(next_r, &mut f);
                next_r += 1;
                live += 1;
            }
            while live > 0 {
                let mut i = 0;
                while i < live {
                    let (a, b, bu, bv) = st[i];
                    if b == 0 {
                        if next_r <= half {
                            st[i] = start(next_r, &mut f);
                            next_r += 1;
                        } else {
                            live -= 1;
                            st[i] = st[live];
                            continue;
                        }
                        i += 1;
                        continue;
                    }
                    let x = a as f64 / b as f64;
                    let k = (x + 0.5f64.copysign(x)) as i64;
                    // branch-free V' = k V - U mod q via k + off >= 0
                    let kv = red.reduce((k + off) as u32 * bv);
                    let nv = red.reduce(kv + qu - bu);
                    f(table[bv as usize * qq + nv as usize] as usize);
                    st[i] = (-b, a - b * k, bv, nv);
                    i += 1;
                }
            }
            return;
        }
        for r in -half..=half {
            // matrix [p, -r; 0, 1], then the continued-fraction chain where
            // each step maps (x1, x2) -> (x2, k x2 - x1)
            let mut big_u = modq(u * pm) as i64;
            let mut big_v = modq(v - u * (r % q)) as i64;
            f(self.index_reduced(big_u as u64, big_v as u64));
            let mut a = -pi;
            let mut b = r;
            while b != 0 {
                let k = round_div(a, b);
                let c = a - b * k;
                a = -b;
                b = c;
                let nv = ((k % q) * big_v - big_u).rem_euclid(q);
                big_u = big_v;
                big_v = nv;
                f(self.index_reduced(big_u as u64, big_v as u64));
            }
        }
    }

    /// Dense `(c, d) -> index` table for reduced `c, d` (unused entry at 0,0).
    fn index_table(&self) -> &[u32] {
        self.table.get_or_init(|| {
            let q = self.q;
            let mut t = vec![u32::MAX; (q * q) as usize];
            for c in 0..q {
                for d in 0..q {
                    if c != 0 || d != 0 {
                        t[(c * q + d) as usize] = self.index_reduced(c, d) as u32;
                    }
                }
            }
            t
        })
    }

    /// Explicit Heilbronn matrices `[a, b, c, d]` (used by tests and by
    /// operator construction for small `p`).
    pub fn heilbronn(p: u64) -> Vec<[i64; 4]> {
        if p == 2 {
            return vec![[1, 0, 0, 2], [2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]];
        }
        let pi = p as i64;
        let mut out = vec![[1, 0, 0, pi]];
        let half = (pi - 1) / 2;
        for r in -half..=half {
            let (mut x1, mut x2, mut y1, mut y2) = (pi, -r, 0i64, 1i64);
            out.push([x1, x2, y1, y2]);
            let mut a = -pi;
            let mut b = r;
            while b != 0 {
                let k = round_div(a, b);
                let c = a - b * k;
                a = -b;
                b = c;
                let x3 = k * x2 - x1;
                x1 = x2;
                x2 = x3;
                let y3 = k * y2 - y1;
                y1 = y2;
                y2 = y3;
                out.push([x1, x2, y1, y2]);
            }
        }
        out
    }

    /// Manin-symbol expansion of `{0, a/b}`: indices with multiplicity
    /// (all coefficients +1).
    pub fn zero_to_cusp(&self, a: i64, b: i64) -> Vec<usize> {
        // convergent denominators q_{-2} = 1, q_{-1} = 0, q_k = c_k q_{k-1} + q_{k-2}
        let mut out = vec![self.index(0, 1)];
        let (mut num, mut den) = (a, b);
        if den < 0 {
            num = -num;
            den = -den;
        }
        let (mut qm2, mut qm1) = (1i64, 0i64);
        let mut k = 0u32;
        let q = self.q as i64;
        while den != 0 {
            let c = num.div_euclid(den);
            let r = num.rem_euclid(den);
            let qk = ((c % q) * qm1 + qm2).rem_euclid(q);
            let sign = if k % 2 == 0 { -1 } else { 1 };
            out.push(self.index(sign * qk, qm1));
            qm2 = qm1;
            qm1 = qk;
            num = den;
            den = r;
            k += 1;
        }
        out
    }
}

/// Remainder by a fixed `u32` divisor via one wide multiplication.
#[derive(Debug, Clone, Copy)]
struct FastMod {
    m: u64,
    d: u32,
}

impl FastMod {
    fn new(d: u32) -> Self {
        FastMod {
            m: u64::MAX / d as u64 + 1,
            d,
        }
    }

    #[inline(always)]
    fn reduce(self, a: u32) -> u32 {
        let low = self.m.wrapping_mul(a as u64);
        ((low as u128 * self.d as u128) >> 64) as u32
    }
}

/// Nearest integer to `a / b`, ties away from zero.
fn round_div(a: i64, b: i64) -> i64 {
    let (a, b) = if b < 0 { (-a, -b) } else { (a, b) };
    if a >= 0 {
        (2 * a + b) / (2 * b)
    } else {
        -((-2 * a + b) / (2 * b))
    }
}
