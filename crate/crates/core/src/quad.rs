//! Imaginary quadratic class groups through positive-definite binary
//! quadratic forms, plus the norm-power construction of ideal classes whose
//! `p`-th power is principal.

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{is_prime, is_squarefree, AbelianStructure};
use crate::error::{Error, Meter, Result, DEFAULT_BUDGET};
use crate::group;

/// Largest `|disc|` accepted by [`class_group`].
pub const MAX_ABS_DISCRIMINANT: i64 = 100_000_000;

/// `Q(sqrt(d))` for squarefree `d < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadField {
    d: i64,
    disc: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::invalid(
                "not-imaginary",
                format!("d = {d} is not negative"),
            ));
        }
        if d < -(MAX_ABS_DISCRIMINANT) {
            return Err(Error::invalid("out-of-range", format!("d = {d} too large")));
        }
        if !is_squarefree(d as i128)? {
            return Err(Error::invalid(
                "not-squarefree",
                format!("d = {d} is not squarefree"),
            ));
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(QuadField { d, disc })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Fundamental discriminant.
    pub fn discriminant(&self) -> i64 {
        self.disc
    }
}

/// Primitive positive-definite form `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::invalid("out-of-range", format!("{x} exceeds 64 bits")))
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = Form { a, b, c };
        if f.discriminant() >= 0 {
            return Err(Error::invalid(
                "indefinite",
                format!("({a},{b},{c}) has nonnegative discriminant"),
            ));
        }
        if a <= 0 {
            return Err(Error::invalid(
                "not-positive",
                format!("({a},{b},{c}) is negative definite"),
            ));
        }
        if a.gcd(&b).gcd(&c) != 1 {
            return Err(Error::invalid(
                "imprimitive",
                format!("({a},{b},{c}) is not primitive"),
            ));
        }
        Ok(f)
    }

    pub fn discriminant(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    /// The identity class of discriminant `disc`.
    pub fn principal(disc: i64) -> Form {
        let b = disc.rem_euclid(2);
        Form {
            a: 1,
            b,
            c: (b * b - disc) / 4,
        }
    }

    pub fn is_principal(&self) -> bool {
        self.reduce() == Form::principal(self.discriminant() as i64)
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !(b < 0 && (b.abs() == a || a == c))
    }

    /// Equivalent reduced form; idempotent.
    pub fn reduce(&self) -> Form {
        let disc = self.discriminant();
        let (mut a, mut b) = (self.a as i128, self.b as i128);
        let mut c = self.c as i128;
        loop {
            if b <= -a || b > a {
                // b -> b mod 2a into (-a, a]
                let mut r = b.rem_euclid(2 * a);
                if r > a {
                    r -= 2 * a;
                }
                b = r;
                c = (b * b - disc) / (4 * a);
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        Form {
            a: a as i64,
            b: b as i64,
            c: c as i64,
        }
    }

    pub fn inverse(&self) -> Form {
        Form {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
        .reduce()
    }

    /// Gauss composition (Shanks' formulation), reduced.
    pub fn compose(&self, other: &Form) -> Result<Form> {
        if self.discriminant() != other.discriminant() {
            return Err(Error::invalid(
                "discriminant-mismatch",
                format!("{self} and {other} have different discriminants"),
            ));
        }
        let (f1, f2) = if self.a > other.a {
            (other, self)
        } else {
            (self, other)
        };
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let e = a2.extended_gcd(&a1);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let e = s.extended_gcd(&d);
            (e.x, -e.y, e.gcd)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
        let f3 = Form {
            a: narrow(a3)?,
            b: narrow(b3)?,
            c: narrow(c3)?,
        };
        debug_assert_eq!(f3.discriminant(), self.discriminant());
        Ok(f3.reduce())
    }

    /// `f^e` for `e >= 0`, reduced.
    pub fn pow(&self, e: u64) -> Form {
        let id = Form::principal(self.discriminant() as i64);
        group::power(&self.reduce(), e, &id, &|x: &Form, y: &Form| {
            x.compose(y).expect("same discriminant")
        })
    }

    /// Order in the class group (searched up to `limit`).
    pub fn order(&self, limit: u64) -> Option<u64> {
        let id = Form::principal(self.discriminant() as i64);
        group::order_of(
            &self.reduce(),
            &id,
            &|x: &Form, y: &Form| x.compose(y).expect("same discriminant"),
            limit,
        )
    }
}

impl std::fmt::Display for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadClassGroup {
    pub discriminant: i64,
    pub class_number: u64,
    pub structure: AbelianStructure,
    /// One generator per invariant factor.
    pub generators: Vec<Form>,
    /// Every reduced form, in lexicographic `(a, b, c)` order.
    pub forms: Vec<Form>,
}

impl QuadClassGroup {
    pub fn l_rank(&self, l: u64) -> usize {
        self.structure.l_rank(l)
    }
}

/// All reduced primitive forms of discriminant `disc < 0`, sorted.
pub fn reduced_forms(disc: i64, budget: u64) -> Result<Vec<Form>> {
    if disc >= 0 || disc.rem_euclid(4) > 1 {
        return Err(Error::invalid(
            "bad-discriminant",
            format!("{disc} is not a negative discriminant"),
        ));
    }
    if disc < -MAX_ABS_DISCRIMINANT {
        return Err(Error::LimitExceeded {
            what: "class group",
            limit: MAX_ABS_DISCRIMINANT as u64,
        });
    }
    let mut meter = Meter::new("class group", budget);
    let abs = -(disc as i128);
    let mut forms = Vec::new();
    let mut a: i128 = 1;
    while 3 * a * a <= abs {
        meter.tick(a as u64)?;
        let mut b = -a + 1;
        // parity of b matches disc
        if (b - disc as i128).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - disc as i128;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let keep = c >= a && !(b < 0 && a == c) && a.gcd(&b).gcd(&c) == 1;
                if keep {
                    forms.push(Form {
                        a: a as i64,
                        b: b as i64,
                        c: c as i64,
                    });
                }
            }
            b += 2;
        }
        a += 1;
    }
    forms.sort();
    Ok(forms)
}

pub fn class_group_with(field: &QuadField, budget: u64) -> Result<QuadClassGroup> {
    let disc = field.discriminant();
    let forms = reduced_forms(disc, budget)?;
    let id = Form::principal(disc);
    let d = group::decompose(&forms, &id, |x: &Form, y: &Form| {
        x.compose(y).expect("same discriminant")
    });
    Ok(QuadClassGroup {
        discriminant: disc,
        class_number: forms.len() as u64,
        structure: d.structure,
        generators: d.generators,
        forms,
    })
}

pub fn class_group(field: &QuadField) -> Result<QuadClassGroup> {
    class_group_with(field, DEFAULT_BUDGET)
}

/// Class of the ideal of norm `w` through `u + sqrt(d)` when `u^2 - d = w^p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormPowerClass {
    /// The ideal as a form `(w, B, C)` before reduction.
    pub ideal_form: Form,
    pub class: Form,
    pub order: u64,
    /// `u + sqrt(d)` has no rational integer factor in `O_K`. Fails only
    /// for `d = 1 mod 4` with `u` odd, where `u + sqrt(d)` is divisible by 2;
    /// such inputs are accepted only when the class is still `p`-torsion.
    pub primitive: bool,
}

pub fn norm_power_class(field: &QuadField, u: i64, w: i64, p: u32) -> Result<NormPowerClass> {
    if !is_prime(p as u128) {
        return Err(Error::invalid("not-prime", format!("p = {p} is not prime")));
    }
    if w <= 1 {
        return Err(Error::invalid(
            "w-too-small",
            format!("need w > 1, got {w}"),
        ));
    }
    let d = field.d() as i128;
    let disc = field.discriminant() as i128;
    let (u, w) = (u as i128, w as i128);
    let lhs = u * u - d;
    let rhs = (0..p).try_fold(1i128, |acc, _| acc.checked_mul(w));
    if rhs != Some(lhs) {
        return Err(Error::invalid(
            "norm-equation",
            format!("{u}^2 - ({d}) != {w}^{p}"),
        ));
    }
    let b = if disc == 4 * d {
        if w.gcd(&(2 * u)) != 1 {
            return Err(Error::invalid(
                "not-coprime",
                format!("gcd(w, 2u) = gcd({w}, {}) != 1", 2 * u),
            ));
        }
        (2 * u).rem_euclid(2 * w)
    } else {
        // B odd, B = u mod w, B^2 = disc mod 4w; smallest in [0, 2w)
        let r = u.rem_euclid(w);
        [r, r + w]
            .into_iter()
            .find(|&b| b % 2 == 1 && (b * b - disc).rem_euclid(4 * w) == 0)
            .ok_or_else(|| {
                Error::invalid(
                    "no-ideal",
                    format!("no ideal of norm {w} through {u} + sqrt({d})"),
                )
            })?
    };
    debug_assert_eq!((b * b - disc).rem_euclid(4 * w), 0);
    let c = (b * b - disc) / (4 * w);
    let ideal_form = Form::new(narrow(w)?, narrow(b)?, narrow(c)?)?;
    let class = ideal_form.reduce();
    let primitive = disc == 4 * d || u % 2 == 0;
    let order = class
        .order(p as u64)
        .filter(|k| p as u64 % k == 0)
        .ok_or_else(|| {
            if primitive {
                Error::invalid(
                    "power-not-principal",
                    format!("{class}^{p} is not principal"),
                )
            } else {
                Error::invalid(
                    "imprimitive",
                    format!("{u} + sqrt({d}) is divisible by 2 and {class}^{p} is not principal"),
                )
            }
        })?;
    Ok(NormPowerClass {
        ideal_form,
        class,
        order,
        primitive,
    })
}
