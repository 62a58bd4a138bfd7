use super::ast::Formula;

/// Target of [`normalize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalForm {
    /// Negations only on atoms.
    Pnf,
    /// Universal quantifiers rewritten as negated existentials.
    Enf,
}

pub fn normalize(f: &Formula, target: NormalForm) -> Formula {
    match target {
        NormalForm::Pnf => pnf(f),
        NormalForm::Enf => enf(f),
    }
}

/// Pushes negations down to atoms.
pub fn pnf(f: &Formula) -> Formula {
    push(f, false)
}

/// PNF of `¬f`.
pub fn negated_pnf(f: &Formula) -> Formula {
    push(f, true)
}

fn push(f: &Formula, neg: bool) -> Formula {
    use Formula as F;
    match (f, neg) {
        (F::True, false) | (F::False, true) => F::True,
        (F::True, true) | (F::False, false) => F::False,
        (F::Atom(_), false) => f.clone(),
        (F::Atom(_), true) => F::not(f.clone()),
        (F::Not(g), _) => push(g, !neg),
        (F::And(l, r), false) => F::and(push(l, false), push(r, false)),
        (F::And(l, r), true) => F::or(push(l, true), push(r, true)),
        (F::Or(l, r), false) => F::or(push(l, false), push(r, false)),
        (F::Or(l, r), true) => F::and(push(l, true), push(r, true)),
        (F::Next(g), _) => F::next(push(g, neg)),
        (F::Until(l, r), false) => F::until(push(l, false), push(r, false)),
        (F::Until(l, r), true) => F::release(push(l, true), push(r, true)),
        (F::Release(l, r), false) => F::release(push(l, false), push(r, false)),
        (F::Release(l, r), true) => F::until(push(l, true), push(r, true)),
        (F::Exists(x, g), false) => F::exists(x.clone(), push(g, false)),
        (F::Exists(x, g), true) => F::forall(x.clone(), push(g, true)),
        (F::Forall(x, g), false) => F::forall(x.clone(), push(g, false)),
        (F::Forall(x, g), true) => F::exists(x.clone(), push(g, true)),
        (F::Bind(a, x, g), _) => F::bind(a.clone(), x.clone(), push(g, neg)),
    }
}

/// Rewrites `[[x]] φ` as `¬<<x>>¬φ`, collapsing double negations.
pub fn enf(f: &Formula) -> Formula {
    use Formula as F;
    match f {
        F::True | F::False | F::Atom(_) => f.clone(),
        F::Not(g) => negate(enf(g)),
        F::And(l, r) => F::and(enf(l), enf(r)),
        F::Or(l, r) => F::or(enf(l), enf(r)),
        F::Next(g) => F::next(enf(g)),
        F::Until(l, r) => F::until(enf(l), enf(r)),
        F::Release(l, r) => F::release(enf(l), enf(r)),
        F::Exists(x, g) => F::exists(x.clone(), enf(g)),
        F::Forall(x, g) => F::not(F::exists(x.clone(), negate(enf(g)))),
        F::Bind(a, x, g) => F::bind(a.clone(), x.clone(), enf(g)),
    }
}

fn negate(f: Formula) -> Formula {
    match f {
        Formula::Not(g) => *g,
        g => Formula::not(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn pushes_through_next_and_quantifier() {
        assert_eq!(pnf(&Formula::not(Formula::next(p()))), Formula::next(Formula::not(p())));
        assert_eq!(
            pnf(&Formula::not(Formula::exists("x", p()))),
            Formula::forall("x", Formula::not(p()))
        );
        assert_eq!(
            pnf(&Formula::not(Formula::until(p(), Formula::atom("q")))),
            Formula::release(Formula::not(p()), Formula::not(Formula::atom("q")))
        );
        assert_eq!(
            pnf(&Formula::not(Formula::bind("a", "x", p()))),
            Formula::bind("a", "x", Formula::not(p()))
        );
    }

    #[test]
    fn enf_has_no_universal() {
        let f = Formula::forall("x", Formula::forall("y", p()));
        let g = enf(&f);
        let rendered = g.to_string();
        assert!(!rendered.contains("[["), "{rendered}");
        assert_eq!(
            g,
            Formula::not(Formula::exists("x", Formula::exists("y", Formula::not(p()))))
        );
    }
}
