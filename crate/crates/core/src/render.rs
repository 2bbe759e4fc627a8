use crate::qcoeff::{render_q_term, QScalar};

/// Joins `scalar * monomial` terms into canonical text.
///
/// A term whose lowest q-coefficient is negative has its sign pulled out.
/// Multi-term scalars are parenthesized in compact form, e.g. `(1+q)*x`.
pub(crate) fn render_terms<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a QScalar, String)>,
{
    let mut out = String::new();
    for (i, (c, monomial)) in terms.into_iter().enumerate() {
        let negative = c.lowest_coeff_negative();
        let magnitude = if negative { -c } else { c.clone() };
        let body = render_term(&magnitude, &monomial);
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn render_term(c: &QScalar, monomial: &str) -> String {
    let scalar = if c.term_count() == 1 {
        if c.is_one() && !monomial.is_empty() {
            return monomial.to_owned();
        }
        let (exp, coeff) = c.terms().next().expect("one term");
        render_q_term(&coeff, exp)
    } else {
        format!("({})", c.to_compact_string())
    };
    if monomial.is_empty() {
        scalar
    } else {
        format!("{scalar}*{monomial}")
    }
}

pub(crate) fn power_of(symbol: &str, exp: i64) -> String {
    match exp {
        0 => String::new(),
        1 => symbol.to_owned(),
        e => format!("{symbol}^{e}"),
    }
}
