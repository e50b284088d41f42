//! Exact isolation of the smallest root of a polynomial in (0, 1].
//!
//! Counting uses a Sturm chain of the square-free part, for which
//! V(a) − V(b) equals the number of roots in the half-open interval (a, b]
//! under the usual skip-zeros convention. Bisection keeps the invariant
//! "no root at or below lo, at least one in (lo, hi]" and therefore
//! converges to the leftmost root. Rational roots hit exactly by a dyadic
//! midpoint or by the right endpoint collapse to a zero-width bracket.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rat::format_rational;

/// The distinguished smallest root in (0,1], or the infinity marker when
/// the polynomial has no root there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootBound {
    /// lo ≤ root ≤ hi with hi − lo below the requested width; lo = hi for
    /// an exactly known rational root.
    Bracket { lo: BigRational, hi: BigRational },
    Infinite,
}

impl RootBound {
    pub fn exact(r: BigRational) -> Self {
        RootBound::Bracket { lo: r.clone(), hi: r }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, RootBound::Infinite)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        match self {
            RootBound::Bracket { lo, hi } => lo <= x && x <= hi,
            RootBound::Infinite => false,
        }
    }

    pub fn width(&self) -> Option<BigRational> {
        match self {
            RootBound::Bracket { lo, hi } => Some(hi - lo),
            RootBound::Infinite => None,
        }
    }

    /// True when the bracket certifies the root equals the given rational.
    pub fn is_exactly(&self, x: &BigRational) -> bool {
        matches!(self, RootBound::Bracket { lo, hi } if lo == x && hi == x)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        match self {
            RootBound::Bracket { lo, hi } => serde_json::json!({
                "lo": format_rational(lo),
                "hi": format_rational(hi),
            }),
            RootBound::Infinite => serde_json::json!({ "infinite": true }),
        }
    }

    pub fn render(&self) -> String {
        match self {
            RootBound::Bracket { lo, hi } if lo == hi => format_rational(lo),
            RootBound::Bracket { lo, hi } => {
                let mid = (lo + hi) / BigRational::from_integer(2.into());
                format!(
                    "≈{} (bracket [{}, {}])",
                    crate::rat::decimal_approx(&mid, 15),
                    format_rational(lo),
                    format_rational(hi)
                )
            }
            RootBound::Infinite => "∞".to_string(),
        }
    }
}

/// Canonical Sturm chain of a square-free polynomial.
struct SturmChain {
    chain: Vec<Polynomial>,
}

impl SturmChain {
    fn new(square_free: &Polynomial) -> Self {
        let mut chain = vec![square_free.clone(), square_free.derivative()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, rem) = chain[k - 2].div_rem(&chain[k - 1]);
            if rem.is_zero() {
                break;
            }
            chain.push(-&rem);
        }
        SturmChain { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.chain {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let pos = v.is_positive();
            if let Some(prev) = last {
                if prev != pos {
                    count += 1;
                }
            }
            last = Some(pos);
        }
        count
    }

    /// Number of distinct roots in (a, b].
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

fn default_width() -> &'static BigRational {
    static W: OnceLock<BigRational> = OnceLock::new();
    W.get_or_init(|| BigRational::new(1.into(), 1_000_000_000_000u64.into()))
}

/// Smallest root of `p` in (0, 1] as a bracket of width ≤ 10⁻¹², or the
/// infinity marker when `p` has no root there. Requires p ≠ 0 and p(0) ≠ 0.
pub fn smallest_root(p: &Polynomial) -> Result<RootBound> {
    smallest_root_with_width(p, default_width())
}

/// Same as [`smallest_root`] with an explicit bracket width.
pub fn smallest_root_with_width(p: &Polynomial, width: &BigRational) -> Result<RootBound> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.coeff(0).is_zero() {
        return Err(Error::RootAtZero);
    }
    if p.is_constant() {
        return Ok(RootBound::Infinite);
    }
    let sf = p.square_free_part();
    let chain = SturmChain::new(&sf);
    let mut lo = BigRational::zero();
    let mut hi = BigRational::one();
    let total = chain.count(&lo, &hi);
    if total == 0 {
        return Ok(RootBound::Infinite);
    }
    loop {
        let in_bracket = chain.count(&lo, &hi);
        if in_bracket == 1 && sf.eval(&hi).is_zero() {
            return Ok(RootBound::exact(hi));
        }
        if in_bracket == 1 && (&hi - &lo) <= *width {
            return Ok(RootBound::Bracket { lo, hi });
        }
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        if chain.count(&lo, &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Decides r(pa) > r(pb) for the smallest (0,1]-roots of two polynomials,
/// with ∞ greater than every bracket. Brackets are refined until disjoint;
/// exact equality is certified through a common root of gcd(pa, pb) inside
/// the overlap.
pub fn strictly_greater(pa: &Polynomial, pb: &Polynomial) -> Result<bool> {
    let ra = smallest_root(pa)?;
    let rb = smallest_root(pb)?;
    match (&ra, &rb) {
        (RootBound::Infinite, RootBound::Infinite) => return Ok(false),
        (RootBound::Infinite, _) => return Ok(true),
        (_, RootBound::Infinite) => return Ok(false),
        _ => {}
    }
    let mut width = default_width().clone();
    let mut ra = ra;
    let mut rb = rb;
    loop {
        let (RootBound::Bracket { lo: la, hi: ha }, RootBound::Bracket { lo: lb, hi: hb }) =
            (&ra, &rb)
        else {
            unreachable!("infinite cases handled above");
        };
        if la > hb {
            return Ok(true);
        }
        if ha < lb {
            return Ok(false);
        }
        if la == ha && lb == hb {
            // both exact; disjointness was ruled out above
            return Ok(false);
        }
        // overlapping brackets: a common root of both polynomials inside the
        // overlap is necessarily the unique root of each bracket
        let g = pa.square_free_part().gcd(&pb.square_free_part());
        if !g.is_constant() {
            let olo = la.max(lb).clone();
            let ohi = ha.min(hb).clone();
            let chain = SturmChain::new(&g.square_free_part());
            // closed overlap [olo, ohi] = explicit left endpoint + (olo, ohi]
            if g.eval(&olo).is_zero() || chain.count(&olo, &ohi) >= 1 {
                return Ok(false);
            }
        }
        width = &width * &width;
        ra = smallest_root_with_width(pa, &width)?;
        rb = smallest_root_with_width(pb, &width)?;
    }
}
