//! Sparse multivariate polynomials over GF(q): parsing, printing,
//! evaluation, degree queries, and scalar linear combinations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::reducer::SystemTable;

/// Exponent vector; one entry per declared variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

// Graded lexicographic: total degree first, then exponent vector.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}
impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    spec: FieldSpec,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, spec: &FieldSpec) -> MultiPoly {
        MultiPoly { nvars, spec: spec.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(c: FieldElement, nvars: usize) -> MultiPoly {
        let mut f = MultiPoly::zero(nvars, c.spec());
        f.add_term(Monomial(vec![0; nvars]), c);
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, FieldElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulate `coeff` onto `mono`, dropping the term if it cancels.
    pub fn add_term(&mut self, mono: Monomial, coeff: FieldElement) {
        assert_eq!(mono.0.len(), self.nvars, "monomial arity mismatch");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars, &self.spec);
        for (m, coeff) in &self.terms {
            out.add_term(m.clone(), coeff.mul(c));
        }
        out
    }

    /// Exact evaluation at a point of A^nvars.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::usage(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = self.spec.zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (x, &e) in point.iter().zip(&mono.0) {
                if e > 0 {
                    term = term.mul(&x.pow(e as u64));
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Max exponent sum over terms; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// True iff every term has exponent sum `d`. The zero polynomial is
    /// homogeneous of every degree.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }
}

/// Sum of coeffs_i * fs_i.
pub fn linear_combination(coeffs: &[FieldElement], fs: &[MultiPoly]) -> Result<MultiPoly> {
    if coeffs.len() != fs.len() {
        return Err(Error::usage(format!(
            "{} coefficients for {} polynomials",
            coeffs.len(),
            fs.len()
        )));
    }
    if fs.is_empty() {
        return Err(Error::usage("empty linear combination"));
    }
    let nvars = fs[0].nvars;
    let spec = fs[0].spec.clone();
    let mut out = MultiPoly::zero(nvars, &spec);
    for (c, f) in coeffs.iter().zip(fs) {
        if f.nvars != nvars || f.spec != spec {
            return Err(Error::usage("polynomials disagree on variables or field"));
        }
        out = out.add(&f.scale(c));
    }
    Ok(out)
}

/// Tabulate k polynomials over a point sequence: row i, column j holds
/// fs[i] evaluated at points[j]. The table map is linear in the rows.
pub fn value_table(
    fs: &[MultiPoly],
    points: &[Vec<FieldElement>],
    labels: Vec<String>,
) -> Result<SystemTable> {
    let spec = fs
        .first()
        .map(|f| f.spec().clone())
        .ok_or_else(|| Error::usage("no polynomials to tabulate"))?;
    let mut rows = Vec::with_capacity(fs.len());
    for f in fs {
        let row = points
            .iter()
            .map(|pt| f.evaluate(pt))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    SystemTable::new(labels, rows, spec)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // descending graded lex, the order humans write
        for (mono, coeff) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if !coeff.is_one() || mono.degree() == 0 {
                factors.push(coeff.to_string());
            }
            for (v, &e) in mono.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(var_name(v)),
                    _ => factors.push(format!("{}^{}", var_name(v), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

// Default display names x1, x2, ... used when no declared names are at hand.
fn var_name(i: usize) -> String {
    format!("x{}", i + 1)
}

/// Render with the caller's variable names; inverse of [`parse_poly`] on
/// its own output.
pub fn format_poly(f: &MultiPoly, vars: &[String]) -> String {
    if f.terms.is_empty() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    for (mono, coeff) in f.terms.iter().rev() {
        let mut factors: Vec<String> = Vec::new();
        if !coeff.is_one() || mono.degree() == 0 {
            factors.push(coeff.to_string());
        }
        for (v, &e) in mono.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars[v].clone()),
                _ => factors.push(format!("{}^{}", vars[v], e)),
            }
        }
        parts.push(factors.join("*"));
    }
    parts.join(" + ")
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    vars: &'a [String],
    spec: &'a FieldSpec,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len()
            && self.text.as_bytes()[self.pos].is_ascii_whitespace()
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.as_bytes().get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expression(&mut self) -> Result<MultiPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.bump();
                self.term()?.scale(&self.spec.from_int(-1))
            }
            Some(b'+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.bump();
                    acc = acc.add(&self.term()?.scale(&self.spec.from_int(-1)));
                }
                Some(c) => {
                    return Err(self.err(format!("unexpected character '{}'", c as char)))
                }
                None => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let nvars = self.vars.len();
        let (mut coeff, mut expo) = match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'{' => {
                (self.coefficient()?, vec![0u32; nvars])
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let (v, e) = self.factor()?;
                let mut expo = vec![0u32; nvars];
                expo[v] += e;
                (self.spec.one(), expo)
            }
            Some(c) => {
                return Err(self.err(format!(
                    "expected a term, found '{}'",
                    c as char
                )))
            }
            None => return Err(self.err("expected a term, found end of input")),
        };
        while self.peek() == Some(b'*') {
            self.bump();
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let (v, e) = self.factor()?;
                    expo[v] += e;
                }
                Some(c) if c.is_ascii_digit() || c == b'{' => {
                    coeff = coeff.mul(&self.coefficient()?);
                }
                _ => return Err(self.err("expected a factor after '*'")),
            }
        }
        let mut f = MultiPoly::zero(nvars, self.spec);
        f.add_term(Monomial(expo), coeff);
        Ok(f)
    }

    fn coefficient(&mut self) -> Result<FieldElement> {
        if self.peek() == Some(b'{') {
            let start = self.pos;
            while self.pos < self.text.len() && self.text.as_bytes()[self.pos] != b'}' {
                self.pos += 1;
            }
            if self.pos == self.text.len() {
                self.pos = start;
                return Err(self.err("unterminated '{' coefficient"));
            }
            self.pos += 1;
            let lit = &self.text[start..self.pos];
            self.spec
                .parse_element(lit)
                .map_err(|e| self.err(e.to_string()))
        } else {
            let start = self.pos;
            while self.pos < self.text.len()
                && self.text.as_bytes()[self.pos].is_ascii_digit()
            {
                self.pos += 1;
            }
            let lit = &self.text[start..self.pos];
            let v: i64 = lit
                .parse()
                .map_err(|_| self.err(format!("bad integer '{lit}'")))?;
            Ok(self.spec.from_int(v))
        }
    }

    /// variable ('^' positive-integer)? -> (variable index, exponent)
    fn factor(&mut self) -> Result<(usize, u32)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() {
            let c = self.text.as_bytes()[self.pos];
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let name = &self.text[start..self.pos];
        let v = self
            .vars
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::parse(1, start + 1, format!("unknown variable '{name}'")))?;
        if self.peek() == Some(b'^') {
            self.bump();
            self.skip_ws();
            let estart = self.pos;
            while self.pos < self.text.len()
                && self.text.as_bytes()[self.pos].is_ascii_digit()
            {
                self.pos += 1;
            }
            let lit = &self.text[estart..self.pos];
            let e: u32 = lit
                .parse()
                .map_err(|_| Error::parse(1, estart + 1, "expected an exponent after '^'"))?;
            if e == 0 {
                return Err(Error::parse(1, estart + 1, "exponent must be positive"));
            }
            Ok((v, e))
        } else {
            Ok((v, 1))
        }
    }
}

/// Parse one polynomial expression over the declared variables.
pub fn parse_poly(text: &str, vars: &[String], spec: &FieldSpec) -> Result<MultiPoly> {
    let mut parser = Parser { text, pos: 0, vars, spec };
    parser.expression()
}
