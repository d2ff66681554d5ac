//! Text literals for fields, elements, curves, points and endomorphisms.
//!
//! Fields: `Q`, `Q(sqrt,d)`, `Q(zeta,n)`. Elements: `p/q`, `p/q+r/s*sqrt`, `[c0,c1,...]`.
//! Curves: `a,b,c over <field>`. Points: `inf` or `(x,y)`. Endomorphisms: `[m]` or a
//! Gaussian integer such as `1+i`, `2-3i`, `i`.

use rug::Rational;

use crate::curve::{Curve, EndoForm, Point};
use crate::nf::{AlgNumber, Field, FieldSpec, NfError};

fn perr(pos: usize, msg: impl Into<String>) -> NfError {
    NfError::Parse { pos, msg: msg.into() }
}

/// Splits on commas outside brackets/parentheses; yields (offset, piece).
fn split_top(s: &str, base: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push((base + start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((base + start, &s[start..]));
    out
}

fn trim_with_offset(s: &str, pos: usize) -> (usize, &str) {
    let lead = s.len() - s.trim_start().len();
    (pos + lead, s.trim())
}

pub fn parse_rational(s: &str, pos: usize) -> Result<Rational, NfError> {
    let (pos, t) = trim_with_offset(s, pos);
    if t.is_empty() {
        return Err(perr(pos, "expected a rational number"));
    }
    let bad = t.char_indices().find(|(_, c)| !(c.is_ascii_digit() || *c == '/' || *c == '-' || *c == '+'));
    if let Some((i, c)) = bad {
        return Err(perr(pos + i, format!("unexpected character {c:?} in rational")));
    }
    let r: Rational = t.parse().map_err(|_| perr(pos, format!("malformed rational {t:?}")))?;
    Ok(r)
}

pub fn parse_field(s: &str) -> Result<FieldSpec, NfError> {
    s.parse()
}

/// Element literal in the given field; rationals are accepted in every field.
pub fn parse_element(s: &str, field: &Field, pos: usize) -> Result<AlgNumber, NfError> {
    let (pos, t) = trim_with_offset(s, pos);
    if let Some(inner) = t.strip_prefix('[') {
        let Some(inner) = inner.strip_suffix(']') else {
            return Err(perr(pos + t.len(), "missing closing ']'"));
        };
        let mut coords = Vec::new();
        for (p, piece) in split_top(inner, pos + 1) {
            coords.push(parse_rational(piece, p)?);
        }
        if coords.len() > field.degree() {
            return Err(perr(pos, format!("{} coordinates for a degree-{} field", coords.len(), field.degree())));
        }
        return Ok(AlgNumber::from_coords(field, coords));
    }
    if let Some(idx) = t.find("sqrt") {
        let FieldSpec::Quadratic { .. } = field.spec() else {
            return Err(perr(pos + idx, format!("`sqrt` needs a quadratic field, not {}", field.spec())));
        };
        if idx + 4 != t.len() {
            return Err(perr(pos + idx + 4, "unexpected text after `sqrt`"));
        }
        let head = &t[..idx];
        // split head into rational part and the sqrt coefficient: "u+v*", "u-v*", "v*", "u+", "-", ""
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
        let (u_str, v_str, v_pos) = match split {
            Some(i) => (&head[..i], &head[i..], pos + i),
            None => ("", head, pos),
        };
        let u = if u_str.is_empty() { Rational::new() } else { parse_rational(u_str, pos)? };
        let v = match v_str {
            "" | "+" => Rational::from(1),
            "-" => Rational::from(-1),
            other => parse_rational(other, v_pos)?,
        };
        return Ok(AlgNumber::from_coords(field, vec![u, v]));
    }
    Ok(AlgNumber::from_rational(field, parse_rational(t, pos)?))
}

pub fn parse_curve(s: &str) -> Result<Curve, NfError> {
    let Some(idx) = s.find(" over ") else {
        return Err(perr(s.len(), "expected `a,b,c over <field>`"));
    };
    let fpos = idx + 6;
    let spec: FieldSpec = s[fpos..].trim().parse().map_err(|e| match e {
        NfError::Parse { pos, msg } => perr(fpos + pos, msg),
        other => other,
    })?;
    let field = Field::new(spec);
    let parts = split_top(&s[..idx], 0);
    if parts.len() != 3 {
        return Err(perr(0, format!("expected three coefficients, found {}", parts.len())));
    }
    let mut co = Vec::new();
    for (p, piece) in parts {
        co.push(parse_element(piece, &field, p)?);
    }
    let [a, b, c]: [AlgNumber; 3] = co.try_into().unwrap();
    Curve::new(a, b, c).map_err(|e| match e {
        crate::curve::CurveError::Nf(n) => n,
        other => perr(0, other.to_string()),
    })
}

/// Point literal on `curve`; the equation is checked exactly.
pub fn parse_point(s: &str, curve: &Curve) -> Result<Point, NfError> {
    let (pos, t) = trim_with_offset(s, 0);
    if t == "inf" || t == "O" {
        return Ok(Point::Infinity);
    }
    let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) else {
        return Err(perr(pos, "expected `inf` or `(x,y)`"));
    };
    let parts = split_top(inner, pos + 1);
    if parts.len() != 2 {
        return Err(perr(pos, "a point needs exactly two coordinates"));
    }
    let x = parse_element(parts[0].1, curve.field(), parts[0].0)?;
    let y = parse_element(parts[1].1, curve.field(), parts[1].0)?;
    let p = Point::Affine { x, y };
    match curve.on_curve(&p) {
        Ok(true) => Ok(p),
        Ok(false) => Err(perr(pos, format!("{p} is not on y^2 = x^3 + ({})x^2 + ({})x + ({})", curve.a(), curve.b(), curve.c()))),
        Err(e) => Err(perr(pos, e.to_string())),
    }
}

/// `[m]` for multiplication by m; `a+bi` for a Gaussian-integer CM endomorphism.
pub fn parse_endo(s: &str) -> Result<EndoForm, NfError> {
    let (pos, t) = trim_with_offset(s, 0);
    if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        let m: i64 = inner.trim().parse().map_err(|_| perr(pos + 1, format!("bad integer {inner:?}")))?;
        return Ok(EndoForm::Scalar(m));
    }
    let Some(body) = t.strip_suffix('i') else {
        let m: i64 = t.parse().map_err(|_| perr(pos, "expected `[m]` or a Gaussian integer like `1+i`"))?;
        return Ok(EndoForm::Scalar(m));
    };
    let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let re: i64 = re.parse().map_err(|_| perr(pos, format!("bad real part {re:?}")))?;
    let im: i64 = match im {
        "" | "+" => 1,
        "-" => -1,
        other => other.parse().map_err(|_| perr(pos + split.unwrap_or(0), format!("bad imaginary part {other:?}")))?,
    };
    Ok(EndoForm::Cm { re, im })
}
