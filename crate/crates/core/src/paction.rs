//! The standard partial action θ of the free group on X:
//! θ_{αβ⁻¹}(βy) = αy for y ∈ F_α ∩ F_β.

use serde::{Deserialize, Serialize};

use crate::shifts::{ShiftError, Subshift};
use crate::verdict::{Confidence, Verdict, Witness};
use crate::words::{EvPeriodicWord, FreeGroupElement, PositivePair};

/// θ_g as a partial map, with the words describing its domain and range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialMap {
    pub g: FreeGroupElement,
    /// `None` when g ∉ F₊F₊⁻¹ (the map is empty).
    pub pair: Option<PositivePair>,
}

impl PartialMap {
    pub fn new(g: &FreeGroupElement) -> PartialMap {
        PartialMap { g: g.clone(), pair: g.positive_pair() }
    }

    pub fn apply(&self, s: &Subshift, x: &EvPeriodicWord) -> Option<EvPeriodicWord> {
        let p = self.pair.as_ref()?;
        if !p.beta.is_prefix_of(&x.prefix(p.beta.len())) {
            return None;
        }
        let y = x.shift(p.beta.len());
        let out = y.prepend(&p.alpha);
        s.contains_point(&out).then_some(out)
    }
}

/// x ∈ X_g: with g = αβ⁻¹, x = αy and βy ∈ X.
pub fn domain_contains(s: &Subshift, g: &FreeGroupElement, x: &EvPeriodicWord) -> bool {
    PartialMap::new(&g.inverse()).apply(s, x).is_some()
}

/// θ_g(x) for x ∈ X_{g⁻¹}.
pub fn act(s: &Subshift, g: &FreeGroupElement, x: &EvPeriodicWord) -> Result<EvPeriodicWord, ShiftError> {
    PartialMap::new(g).apply(s, x).ok_or_else(|| {
        ShiftError::Precondition(format!(
            "{} is not in the domain of θ_{}",
            s.show_point(x),
            s.alphabet().fmt_element(g)
        ))
    })
}

/// The unique fixed point να^∞ of g = να^{±1}ν⁻¹, when it lies in X.
pub fn fixed_point(s: &Subshift, g: &FreeGroupElement) -> Result<Option<EvPeriodicWord>, ShiftError> {
    if g.is_unit() {
        return Err(ShiftError::Precondition("every point is fixed by the unit".into()));
    }
    let Some(p) = g.positive_pair() else { return Ok(None) };
    let (nu, alpha) = if p.beta.is_prefix_of(&p.alpha) {
        (p.beta.clone(), &p.alpha.letters()[p.beta.len()..])
    } else if p.alpha.is_prefix_of(&p.beta) {
        (p.alpha.clone(), &p.beta.letters()[p.alpha.len()..])
    } else {
        return Ok(None);
    };
    let Some(x) = EvPeriodicWord::new(nu, crate::words::Word(alpha.to_vec())) else { return Ok(None) };
    if !s.contains_point(&x) {
        return Ok(None);
    }
    Ok((PartialMap::new(g).apply(s, &x).as_ref() == Some(&x)).then_some(x))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: usize,
    pub counterexamples: Vec<String>,
}

/// Pointwise partial-representation identities:
/// PR1 θ_e = id; PR2 θ_gθ_hθ_{h⁻¹} = θ_{gh}θ_{h⁻¹} and θ_{g⁻¹}θ_gθ_h = θ_{g⁻¹}θ_{gh};
/// PR3 θ_{g⁻¹}θ_g = id on X_{g⁻¹}; semi-saturation θ_gθ_h = θ_{gh} when
/// |gh| = |g| + |h|. Definedness must agree as well.
pub fn check_partial_rep_axioms(
    s: &Subshift,
    pairs: &[(FreeGroupElement, FreeGroupElement)],
    points: &[EvPeriodicWord],
) -> (Verdict, AxiomReport) {
    let mut report = AxiomReport::default();
    let al = s.alphabet();
    let fail = |report: &mut AxiomReport, what: &str, g: &FreeGroupElement, h: &FreeGroupElement, x: &EvPeriodicWord| {
        if report.counterexamples.len() < 20 {
            report.counterexamples.push(format!(
                "{what}: g={} h={} x={}",
                al.fmt_element(g),
                al.fmt_element(h),
                al.fmt_point(x)
            ));
        }
    };
    let th = |g: &FreeGroupElement, x: Option<EvPeriodicWord>| x.and_then(|x| PartialMap::new(g).apply(s, &x));
    let unit = FreeGroupElement::unit();
    for x in points {
        report.checks += 1;
        if th(&unit, Some(x.clone())).as_ref() != Some(x) {
            fail(&mut report, "PR1", &unit, &unit, x);
        }
    }
    for (g, h) in pairs {
        let gi = g.inverse();
        let hi = h.inverse();
        let gh = g.mul(h);
        let saturated = gh.len() == g.len() + h.len();
        for x in points {
            let x0 = Some(x.clone());
            report.checks += 4;
            let lhs = th(g, th(h, th(&hi, x0.clone())));
            let rhs = th(&gh, th(&hi, x0.clone()));
            if lhs != rhs {
                fail(&mut report, "PR2", g, h, x);
            }
            let lhs = th(&gi, th(g, th(h, x0.clone())));
            let rhs = th(&gi, th(&gh, x0.clone()));
            if lhs != rhs {
                fail(&mut report, "PR2'", g, h, x);
            }
            let y = th(g, x0.clone());
            if y.is_some() && th(&gi, y.clone()) != x0 {
                fail(&mut report, "PR3", g, h, x);
            }
            if th(g, th(&gi, y.clone())) != y {
                fail(&mut report, "PR3'", g, h, x);
            }
            if saturated {
                report.checks += 1;
                if th(g, th(h, x0.clone())) != th(&gh, x0) {
                    fail(&mut report, "semi-saturation", g, h, x);
                }
            }
        }
    }
    let verdict = if report.counterexamples.is_empty() {
        Verdict::holds("partial-representation", Confidence::Exact.and(s.confidence()))
    } else {
        Verdict::fails(
            "partial-representation",
            s.confidence(),
            Witness::Clause { clause: "axioms".into(), detail: report.counterexamples[0].clone() },
        )
    };
    (verdict, report)
}

/// The first `count` points of X in witness order (short descriptions
/// first), for sampling. Fewer are returned when X is sparse: the search
/// stops at description length 16 or k^d > 2^12 candidates.
pub fn sample_points(s: &Subshift, count: usize) -> Vec<EvPeriodicWord> {
    let k = s.alphabet().len();
    let mut out = Vec::new();
    let mut d = 1;
    while out.len() < count && d <= 16 && k.checked_pow(d as u32).is_some_and(|n| n <= 1 << 12) {
        for x in crate::words::ev_periodic_of_description(s.alphabet().len(), d) {
            if out.len() == count {
                break;
            }
            if s.contains_point(&x) {
                out.push(x);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_examples() {
        let s = Subshift::builtin("even").unwrap();
        let al = s.alphabet();
        let one = al.parse_element("1").unwrap();
        let ones = s.point("(1)").unwrap();
        assert!(domain_contains(&s, &one.inverse(), &ones));
        assert_eq!(act(&s, &one, &ones).unwrap(), ones);
        let g = al.parse_element("11 0^-1").unwrap();
        assert_eq!(act(&s, &g, &s.point("0(1)").unwrap()).unwrap(), ones);
        assert_eq!(fixed_point(&s, &one).unwrap(), Some(ones.clone()));
        let g = al.parse_element("1 0 1 0^-1 1^-1").unwrap();
        assert_eq!(fixed_point(&s, &g).unwrap(), Some(s.point("10(1)").unwrap()));
        assert_eq!(fixed_point(&s, &al.parse_element("0 1^-1").unwrap()).unwrap(), None);
        assert!(fixed_point(&s, &FreeGroupElement::unit()).is_err());
        assert!(!domain_contains(&s, &al.parse_element("0^-1 1").unwrap(), &ones));
    }

    #[test]
    fn axioms_small_sample() {
        let s = Subshift::builtin("even").unwrap();
        let ball = crate::words::ball(2, 2);
        let pairs: Vec<_> = ball.iter().flat_map(|g| ball.iter().map(move |h| (g.clone(), h.clone()))).collect();
        let (v, r) = check_partial_rep_axioms(&s, &pairs, &sample_points(&s, 12));
        assert!(v.value, "{:?}", r.counterexamples);
    }
}
