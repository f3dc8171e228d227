//! Minimal double-double arithmetic (~32 significant digits) for the
//! coefficient-fit oracle, which needs samples well below the f64 noise
//! floor. Standard error-free transforms (Dekker/Knuth two_sum, FMA
//! two_prod); only the handful of operations the edge solvers use: +, −, ×,
//! ÷, √, ∛.

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Self) -> Self {
        let (s1, mut s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        s2 += t1;
        let (s1, mut s2) = quick_two_sum(s1, s2);
        s2 += t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    pub fn mul(self, other: Self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, other.hi);
        p2 += self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    pub fn scale(self, s: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, s);
        p2 += self.lo * s;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    pub fn div(self, other: Self) -> Self {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.scale(q1));
        let q2 = (r.hi + r.lo) / other.hi;
        let r2 = r.sub(other.scale(q2));
        let q3 = (r2.hi + r2.lo) / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        let (hi, lo2) = quick_two_sum(hi, lo + q3);
        Self { hi, lo: lo2 }
    }

    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 {
            return Self::from_f64(0.0);
        }
        // one Newton step in double-double doubles the f64 seed's digits
        let seed = Self::from_f64(self.hi.sqrt());
        seed.add(self.div(seed)).scale(0.5)
    }

    pub fn cbrt(self) -> Self {
        if self.hi == 0.0 {
            return Self::from_f64(0.0);
        }
        let mut c = Self::from_f64(self.hi.cbrt());
        for _ in 0..2 {
            // c ← (2c + x/c²)/3
            let c2 = c.mul(c);
            c = c.scale(2.0).add(self.div(c2)).div(Self::from_f64(3.0));
        }
        c
    }

    pub fn abs_diff(self, other: Self) -> f64 {
        self.sub(other).to_f64().abs()
    }
}
