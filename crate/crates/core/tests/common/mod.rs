//! Test-only helpers: a double-double reference evaluator for contour points,
//! independent of the `f64` code path under test.

#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` carrying about 106 bits of precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };

    pub fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn scale(self, k: f64) -> Self {
        self * Dd::from(k)
    }

    pub fn sin_cos(self) -> (Dd, Dd) {
        let two_pi = Dd::PI.scale(2.0);
        let half_pi = Dd::PI.scale(0.5);
        let k = (self.hi / two_pi.hi).round();
        let r = self - two_pi.scale(k);
        let j = (r.hi / half_pi.hi).round();
        let r = r - half_pi.scale(j);

        let r2 = r * r;
        let mut s = r;
        let mut term = r;
        let mut c = Dd::ONE;
        let mut cterm = Dd::ONE;
        let mut n = 1.0;
        while term.hi.abs() > 1e-40 || cterm.hi.abs() > 1e-40 {
            term = -(term * r2) / Dd::from((2.0 * n) * (2.0 * n + 1.0));
            cterm = -(cterm * r2) / Dd::from((2.0 * n - 1.0) * (2.0 * n));
            s = s + term;
            c = c + cterm;
            n += 1.0;
            if n > 60.0 {
                break;
            }
        }
        match (j as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, y: Dd) -> Dd {
        self + (-y)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, y: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, y.hi);
        Dd::renorm(p, e + (self.hi * y.lo + self.lo * y.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, y: Dd) -> Dd {
        let q1 = self.hi / y.hi;
        let r = self - y * Dd::from(q1);
        let q2 = r.hi / y.hi;
        let r = r - y * Dd::from(q2);
        let q3 = r.hi / y.hi;
        let (q, e) = quick_two_sum(q1, q2);
        Dd::renorm(q, e) + Dd::from(q3)
    }
}

/// Grid angle `2πi/q` in double-double.
pub fn grid_theta(i: usize, q: usize) -> Dd {
    Dd::PI.scale(2.0) * Dd::from(i as f64) / Dd::from(q as f64)
}

/// Reference wave value `λ1 sin(n1θ) + λ2 sin(n2θ) + η ε`.
pub fn wave(n1: u32, n2: u32, l1: f64, l2: f64, eta: f64, eps: f64, theta: Dd) -> Dd {
    let (s1, _) = (theta * Dd::from(f64::from(n1))).sin_cos();
    let (s2, _) = (theta * Dd::from(f64::from(n2))).sin_cos();
    s1 * Dd::from(l1) + s2 * Dd::from(l2) + Dd::from(eta) * Dd::from(eps)
}

/// Reference contour point at grid index `i` of `q`.
#[allow(clippy::too_many_arguments)]
pub fn contour_point(
    a: f64,
    b: f64,
    n1: u32,
    n2: u32,
    l1: f64,
    l2: f64,
    eta: f64,
    eps: f64,
    i: usize,
    q: usize,
) -> (f64, f64) {
    let theta = grid_theta(i, q);
    let radial = wave(n1, n2, l1, l2, eta, eps, theta) + Dd::ONE;
    let (s, c) = theta.sin_cos();
    ((Dd::from(a) * radial * c).to_f64(), (Dd::from(b) * radial * s).to_f64())
}

/// Error of `got` against `want`, relative to the contour's scale
/// `max(a, b) · (1 + λ1 + λ2 + η)`.
pub fn scaled_error(got: (f64, f64), want: (f64, f64), scale: f64) -> f64 {
    (got.0 - want.0).hypot(got.1 - want.1) / scale
}

/// Sanity checks of the reference evaluator against known constants.
pub fn oracle_self_test() {
    let (s, c) = (Dd::PI / Dd::from(6.0)).sin_cos();
    assert!((s.to_f64() - 0.5).abs() < 1e-16);
    assert!((c * c - Dd::from(0.75)).hi.abs() < 1e-30);
    // sin(π/6) = 1/2 to double-double accuracy
    assert!((s - Dd::from(0.5)).hi.abs() < 1e-30, "{:?}", s - Dd::from(0.5));
    let (s, c) = (Dd::PI.scale(2.0) * Dd::from(7.0) / Dd::from(8.0)).sin_cos();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((s.to_f64() + h).abs() < 1e-16 && (c.to_f64() - h).abs() < 1e-16);
    let third = Dd::ONE / Dd::from(3.0);
    assert!((third * Dd::from(3.0) - Dd::ONE).hi.abs() < 1e-31);
}

/// Every regular file under `root`, keyed by its `/`-separated relative path.
pub fn file_tree(root: &std::path::Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    fn walk(root: &std::path::Path, dir: &std::path::Path, out: &mut std::collections::BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .components()
                    .map(|c| c.as_os_str().to_string_lossy())
                    .collect::<Vec<_>>()
                    .join("/");
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = std::collections::BTreeMap::new();
    walk(root, root, &mut out);
    out
}
