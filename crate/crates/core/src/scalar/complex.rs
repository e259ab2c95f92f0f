//! High-precision complex floats backed by arbitrary-precision binary
//! floats. The domain carries an explicit precision in bits and an explicit
//! comparison tolerance; all verification layers go through the tolerance,
//! never through exact float equality.

use super::Domain;
use crate::error::{Error, Result};
use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use std::cell::RefCell;
use std::rc::Rc;

const RM: RoundingMode = RoundingMode::ToEven;

/// Real arbitrary-precision float.
pub type Mpf = BigFloat;

#[derive(Clone, Debug, PartialEq)]
pub struct Cplx {
    pub re: Mpf,
    pub im: Mpf,
}

#[derive(Clone, Debug)]
pub struct ComplexFloats {
    pub prec: usize,
    pub tol: f64,
    consts: Rc<RefCell<Consts>>,
}

impl PartialEq for ComplexFloats {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec
    }
}

impl ComplexFloats {
    pub fn new(prec_bits: usize, tol: f64) -> Self {
        ComplexFloats {
            prec: prec_bits,
            tol,
            consts: Rc::new(RefCell::new(Consts::new().expect("constants cache"))),
        }
    }

    pub fn re_from_f64(&self, x: f64) -> Mpf {
        BigFloat::from_f64(x, self.prec)
    }

    pub fn from_f64(&self, re: f64, im: f64) -> Cplx {
        Cplx {
            re: self.re_from_f64(re),
            im: self.re_from_f64(im),
        }
    }

    pub fn from_str_parts(&self, re: &str, im: &str) -> Result<Cplx> {
        let mut cc = self.consts.borrow_mut();
        let parse = |s: &str, cc: &mut Consts| -> Result<Mpf> {
            let v = BigFloat::parse(s, Radix::Dec, self.prec, RM, cc);
            if v.is_nan() {
                return Err(Error::config(format!("bad float literal {s:?}")));
            }
            Ok(v)
        };
        Ok(Cplx {
            re: parse(re, &mut cc)?,
            im: parse(im, &mut cc)?,
        })
    }

    pub fn pi(&self) -> Mpf {
        self.consts.borrow_mut().pi(self.prec, RM)
    }

    /// 2*pi*i
    pub fn two_pi_i(&self) -> Cplx {
        let two_pi = self.pi().mul(&self.re_from_f64(2.0), self.prec, RM);
        Cplx {
            re: self.re_from_f64(0.0),
            im: two_pi,
        }
    }

    pub fn i(&self) -> Cplx {
        self.from_f64(0.0, 1.0)
    }

    pub fn re_add(&self, a: &Mpf, b: &Mpf) -> Mpf {
        a.add(b, self.prec, RM)
    }
    pub fn re_sub(&self, a: &Mpf, b: &Mpf) -> Mpf {
        a.sub(b, self.prec, RM)
    }
    pub fn re_mul(&self, a: &Mpf, b: &Mpf) -> Mpf {
        a.mul(b, self.prec, RM)
    }
    pub fn re_div(&self, a: &Mpf, b: &Mpf) -> Mpf {
        a.div(b, self.prec, RM)
    }
    pub fn re_exp(&self, a: &Mpf) -> Mpf {
        a.exp(self.prec, RM, &mut self.consts.borrow_mut())
    }
    pub fn re_sin(&self, a: &Mpf) -> Mpf {
        a.sin(self.prec, RM, &mut self.consts.borrow_mut())
    }
    pub fn re_cos(&self, a: &Mpf) -> Mpf {
        a.cos(self.prec, RM, &mut self.consts.borrow_mut())
    }
    pub fn re_sqrt(&self, a: &Mpf) -> Mpf {
        a.sqrt(self.prec, RM)
    }

    /// exp(a) for complex a.
    pub fn exp(&self, a: &Cplx) -> Cplx {
        let m = self.re_exp(&a.re);
        Cplx {
            re: self.re_mul(&m, &self.re_cos(&a.im)),
            im: self.re_mul(&m, &self.re_sin(&a.im)),
        }
    }

    pub fn abs2(&self, a: &Cplx) -> Mpf {
        self.re_add(
            &self.re_mul(&a.re, &a.re),
            &self.re_mul(&a.im, &a.im),
        )
    }

    pub fn conj(&self, a: &Cplx) -> Cplx {
        Cplx {
            re: a.re.clone(),
            im: a.im.neg(),
        }
    }

    pub fn scale_f64(&self, a: &Cplx, s: f64) -> Cplx {
        let sf = self.re_from_f64(s);
        Cplx {
            re: self.re_mul(&a.re, &sf),
            im: self.re_mul(&a.im, &sf),
        }
    }
}

pub fn mpf_to_f64(x: &Mpf) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    format!("{x}").parse::<f64>().unwrap_or(f64::NAN)
}

pub fn cplx_to_f64(a: &Cplx) -> (f64, f64) {
    (mpf_to_f64(&a.re), mpf_to_f64(&a.im))
}

impl Domain for ComplexFloats {
    type Elem = Cplx;

    fn zero(&self) -> Cplx {
        self.from_f64(0.0, 0.0)
    }
    fn one(&self) -> Cplx {
        self.from_f64(1.0, 0.0)
    }
    fn is_zero(&self, a: &Cplx) -> bool {
        a.re.is_zero() && a.im.is_zero()
    }
    fn add(&self, a: &Cplx, b: &Cplx) -> Cplx {
        Cplx {
            re: self.re_add(&a.re, &b.re),
            im: self.re_add(&a.im, &b.im),
        }
    }
    fn sub(&self, a: &Cplx, b: &Cplx) -> Cplx {
        Cplx {
            re: self.re_sub(&a.re, &b.re),
            im: self.re_sub(&a.im, &b.im),
        }
    }
    fn neg(&self, a: &Cplx) -> Cplx {
        Cplx {
            re: a.re.neg(),
            im: a.im.neg(),
        }
    }
    fn mul(&self, a: &Cplx, b: &Cplx) -> Cplx {
        Cplx {
            re: self.re_sub(&self.re_mul(&a.re, &b.re), &self.re_mul(&a.im, &b.im)),
            im: self.re_add(&self.re_mul(&a.re, &b.im), &self.re_mul(&a.im, &b.re)),
        }
    }

    fn inv(&self, a: &Cplx) -> Result<Cplx> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero("complex floats".into()));
        }
        let n = self.abs2(a);
        Ok(Cplx {
            re: self.re_div(&a.re, &n),
            im: self.re_div(&a.im.neg(), &n),
        })
    }

    fn from_rat(&self, r: &super::Rat) -> Cplx {
        // Exact embed: numerator/denominator through integer-valued floats.
        let big_to_mpf = |b: &num_bigint::BigInt| -> Mpf {
            let mut cc = self.consts.borrow_mut();
            BigFloat::parse(&b.to_string(), Radix::Dec, self.prec, RM, &mut cc)
        };
        let n = big_to_mpf(r.numer());
        let d = big_to_mpf(r.denom());
        Cplx {
            re: self.re_div(&n, &d),
            im: self.re_from_f64(0.0),
        }
    }

    fn abs_approx(&self, a: &Cplx) -> Option<f64> {
        let m2 = self.abs2(a);
        Some(mpf_to_f64(&m2).abs().sqrt())
    }

    fn sqrt(&self, a: &Cplx) -> Option<Cplx> {
        // Principal branch: Re(sqrt) >= 0, with sign(Im a) fixing the
        // imaginary part on the cut.
        if self.is_zero(a) {
            return Some(self.zero());
        }
        let r = self.re_sqrt(&self.abs2(a));
        let half = self.re_from_f64(0.5);
        let re2 = self.re_mul(&self.re_add(&r, &a.re), &half);
        let im2 = self.re_mul(&self.re_sub(&r, &a.re), &half);
        let mut sre = self.re_sqrt(&re2.abs());
        let mut sim = self.re_sqrt(&im2.abs());
        if a.im.is_negative() {
            sim = sim.neg();
        }
        if sre.is_nan() {
            sre = self.re_from_f64(0.0);
        }
        if sim.is_nan() {
            sim = self.re_from_f64(0.0);
        }
        Some(Cplx { re: sre, im: sim })
    }

    fn fmt_elem(&self, a: &Cplx) -> String {
        let (re, im) = cplx_to_f64(a);
        format!("{re:+.16e}{im:+.16e}i")
    }

    fn elem_to_json(&self, a: &Cplx) -> serde_json::Value {
        serde_json::json!({
            "re": format!("{}", a.re),
            "im": format!("{}", a.im),
            "bits": self.prec,
        })
    }

    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Cplx> {
        let re = v
            .get("re")
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::config("complex scalar needs string \"re\""))?;
        let im = v
            .get("im")
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::config("complex scalar needs string \"im\""))?;
        self.from_str_parts(re, im)
    }
}
