//! Occurrence-minimizing rewriting of sparse polynomials.
//!
//! Interval evaluation overestimates each time a variable reappears, so a
//! rewritten form with fewer variable leaves usually evaluates tighter. The
//! rewriter is a greedy partial factorization: pull out the common monomial
//! and content, otherwise split on the most frequent power x^d.

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::interval::{enclose_rational, Interval};

pub use parse::{parse_expr, ParseError};

pub type Exponents = Vec<u32>;

/// Polynomial with exact rational coefficients. Zero coefficients are never
/// stored, so the map keys are the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    names: Vec<String>,
    terms: BTreeMap<Exponents, BigRational>,
}

impl SparsePoly {
    pub fn zero(names: Vec<String>) -> Self {
        SparsePoly { names, terms: BTreeMap::new() }
    }

    pub fn constant(names: Vec<String>, c: BigRational) -> Self {
        let mut p = SparsePoly::zero(names);
        p.add_term(vec![0; p.nvars()], c);
        p
    }

    pub fn var(names: Vec<String>, index: usize) -> Self {
        let mut exps = vec![0; names.len()];
        exps[index] = 1;
        let mut p = SparsePoly::zero(names);
        p.add_term(exps, BigRational::one());
        p
    }

    /// Names x0, x1, ...
    pub fn default_names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    pub fn from_terms(names: Vec<String>, terms: impl IntoIterator<Item = (Exponents, BigRational)>) -> Self {
        let mut p = SparsePoly::zero(names);
        for (e, c) in terms {
            assert_eq!(e.len(), p.nvars(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exps: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> SparsePoly {
        SparsePoly::from_terms(self.names.clone(), self.terms.iter().map(|(e, c)| (e.clone(), c * k)))
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.names.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, d: u32) -> SparsePoly {
        let mut out = SparsePoly::constant(self.names.clone(), BigRational::one());
        for _ in 0..d {
            out = out.mul(self);
        }
        out
    }

    /// Coefficients of the powers of variable `v`, each free of `v`.
    pub fn coefficients_in(&self, v: usize) -> BTreeMap<u32, SparsePoly> {
        let mut out: BTreeMap<u32, SparsePoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut q = e.clone();
            q[v] = 0;
            out.entry(e[v]).or_insert_with(|| SparsePoly::zero(self.names.clone())).add_term(q, c.clone());
        }
        out
    }

    /// Exact quotient `self / q`, or `None` if `q` does not divide `self`.
    /// Division by leading terms in lexicographic order leaves a zero
    /// remainder exactly when the division is exact.
    pub fn div_exact(&self, q: &SparsePoly) -> Option<SparsePoly> {
        let (lead_e, lead_c) = q.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero(self.names.clone());
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let step = SparsePoly::from_terms(
                self.names.clone(),
                [(e.iter().zip(lead_e).map(|(a, b)| a - b).collect(), c / lead_c)],
            );
            rem = rem.sub(&step.mul(q));
            quot = quot.add(&step);
        }
        Some(quot)
    }

    /// A non-constant factor common to all coefficients with respect to
    /// some variable. Each coefficient, fewest terms first, is tried against
    /// the others by exact division. Variables are tried in index order.
    fn split_factor(&self) -> Option<(SparsePoly, SparsePoly)> {
        for v in 0..self.nvars() {
            let coeffs = self.coefficients_in(v);
            if coeffs.len() < 2 {
                continue;
            }
            let mut cands: Vec<&SparsePoly> = coeffs.values().filter(|c| c.total_degree() > 0).collect();
            cands.sort_by_key(|c| c.len());
            for cand in cands {
                if coeffs.values().all(|c| c.div_exact(cand).is_some()) {
                    let cofactor = self.div_exact(cand).expect("divides every coefficient");
                    return Some((cand.clone(), cofactor));
                }
            }
        }
        None
    }

    /// Sum-of-monomials tree, the baseline the rewriter is compared with.
    pub fn naive_tree(&self) -> Expr {
        Expr::sum(self.terms.iter().map(|(e, c)| monomial(c.clone(), e)).collect())
    }

    /// 288·vol² of a tetrahedron as a polynomial in the squared edge lengths
    /// x0..x5 ordered ab, ac, ad, bc, bd, cd: the bordered 5×5 determinant.
    pub fn cayley_menger() -> SparsePoly {
        let names = SparsePoly::default_names(6);
        let zero = SparsePoly::zero(names.clone());
        let one = SparsePoly::constant(names.clone(), BigRational::one());
        let x = |i| SparsePoly::var(names.clone(), i);
        let mut m: Vec<Vec<SparsePoly>> = vec![vec![zero.clone(); 5]; 5];
        for cell in &mut m[0][1..] {
            *cell = one.clone();
        }
        for row in &mut m[1..] {
            row[0] = one.clone();
        }
        for (k, (i, j)) in crate::geometry::EDGE_VERTICES.iter().enumerate() {
            m[i + 1][j + 1] = x(k);
            m[j + 1][i + 1] = x(k);
        }
        determinant(&m, &zero)
    }
}

fn determinant(m: &[Vec<SparsePoly>], zero: &SparsePoly) -> SparsePoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = zero.clone();
    for col in 0..n {
        if m[0][col].is_empty() {
            continue;
        }
        let minor: Vec<Vec<SparsePoly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, p)| p.clone()).collect()).collect();
        let term = m[0][col].mul(&determinant(&minor, zero));
        acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Expression tree. Subtraction is an added term with a negative constant
/// factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(BigRational),
    Var(usize),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, u32),
}

fn monomial(c: BigRational, exps: &[u32]) -> Expr {
    let mut factors = Vec::new();
    if !c.is_one() {
        factors.push(Expr::Const(c));
    }
    for (v, &d) in exps.iter().enumerate() {
        match d {
            0 => {}
            1 => factors.push(Expr::Var(v)),
            _ => factors.push(Expr::Pow(Box::new(Expr::Var(v)), d)),
        }
    }
    Expr::product(factors)
}

impl Expr {
    pub fn sum(mut terms: Vec<Expr>) -> Expr {
        match terms.len() {
            0 => Expr::Const(BigRational::zero()),
            1 => terms.pop().unwrap(),
            _ => Expr::Add(terms),
        }
    }

    pub fn product(factors: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                Expr::Mul(inner) => flat.extend(inner),
                Expr::Const(c) if c.is_one() => {}
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Expr::Const(BigRational::one()),
            1 => flat.pop().unwrap(),
            _ => Expr::Mul(flat),
        }
    }

    /// Variable leaves; x^d counts once.
    pub fn occurrences(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(_) => 1,
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().map(Expr::occurrences).sum(),
            Expr::Pow(b, _) => b.occurrences(),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(v) => Some(*v),
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().filter_map(Expr::max_var).max(),
            Expr::Pow(b, _) => b.max_var(),
        }
    }

    pub fn expand(&self, names: &[String]) -> SparsePoly {
        let names = names.to_vec();
        match self {
            Expr::Const(c) => SparsePoly::constant(names, c.clone()),
            Expr::Var(v) => SparsePoly::var(names, *v),
            Expr::Add(xs) => xs.iter().fold(SparsePoly::zero(names.clone()), |acc, x| acc.add(&x.expand(&names))),
            Expr::Mul(xs) => xs
                .iter()
                .fold(SparsePoly::constant(names.clone(), BigRational::one()), |acc, x| acc.mul(&x.expand(&names))),
            Expr::Pow(b, d) => b.expand(&names).pow(*d),
        }
    }

    /// Interval evaluation; `None` if a constant has no finite enclosure.
    pub fn eval(&self, vars: &[Interval]) -> Option<Interval> {
        Some(match self {
            Expr::Const(c) => enclose_rational(c).ok()?,
            Expr::Var(v) => vars[*v],
            Expr::Add(xs) => {
                let mut acc = Interval::ZERO;
                for x in xs {
                    acc = acc + x.eval(vars)?;
                }
                acc
            }
            Expr::Mul(xs) => {
                let mut acc = Interval::ONE;
                for x in xs {
                    acc = acc * x.eval(vars)?;
                }
                acc
            }
            Expr::Pow(b, d) => b.eval(vars)?.powi(*d),
        })
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, names }
    }

    /// The positive form, when the leading constant factor is negative.
    fn negated(&self) -> Option<Expr> {
        match self {
            Expr::Const(c) if c.is_negative() => Some(Expr::Const(-c)),
            Expr::Mul(xs) => match xs.first() {
                Some(Expr::Const(c)) if c.is_negative() => {
                    let mut rest = xs.clone();
                    rest[0] = Expr::Const(-c);
                    Some(Expr::product(rest))
                }
                _ => None,
            },
            _ => None,
        }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    names: &'a [String],
}

impl ExprDisplay<'_> {
    fn write(&self, e: &Expr, f: &mut fmt::Formatter<'_>, in_product: bool) -> fmt::Result {
        match e {
            Expr::Const(c) => {
                if in_product && (c.is_negative() || !c.is_integer()) {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            Expr::Var(v) => write!(f, "{}", self.names[*v]),
            Expr::Pow(b, d) => {
                if matches!(**b, Expr::Add(_) | Expr::Mul(_)) {
                    write!(f, "(")?;
                    self.write(b, f, false)?;
                    write!(f, ")^{d}")
                } else {
                    self.write(b, f, true)?;
                    write!(f, "^{d}")
                }
            }
            Expr::Mul(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    let leading = i == 0 && matches!(x, Expr::Const(c) if !c.is_negative());
                    if matches!(x, Expr::Add(_)) {
                        write!(f, "(")?;
                        self.write(x, f, false)?;
                        write!(f, ")")?;
                    } else {
                        self.write(x, f, !leading)?;
                    }
                }
                Ok(())
            }
            Expr::Add(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    match x.negated() {
                        Some(pos) => {
                            write!(f, "{}", if i == 0 { "-" } else { " - " })?;
                            self.write_summand(&pos, f)?;
                        }
                        None => {
                            if i > 0 {
                                write!(f, " + ")?;
                            }
                            self.write_summand(x, f)?;
                        }
                    }
                }
                Ok(())
            }
        }
    }

    fn write_summand(&self, x: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if matches!(x, Expr::Add(_)) {
            write!(f, "(")?;
            self.write(x, f, false)?;
            write!(f, ")")
        } else {
            self.write(x, f, false)
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr.negated() {
            Some(pos) if !matches!(self.expr, Expr::Const(_)) => {
                write!(f, "-")?;
                if matches!(pos, Expr::Add(_)) {
                    write!(f, "(")?;
                    self.write(&pos, f, false)?;
                    write!(f, ")")
                } else {
                    self.write(&pos, f, true)
                }
            }
            _ => self.write(self.expr, f, false),
        }
    }
}

fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    let num = a.numer().gcd(b.numer());
    let den = a.denom().lcm(b.denom());
    BigRational::new(num, den)
}

/// The greedy partial factorization.
pub fn greedy_factor(p: &SparsePoly) -> Expr {
    if p.is_empty() {
        return Expr::Const(BigRational::zero());
    }
    if p.len() == 1 || p.total_degree() <= 1 {
        return p.naive_tree();
    }
    let n = p.nvars();

    // common monomial and content, sign taken from the first term
    let mut common: Exponents = p.terms.keys().next().unwrap().clone();
    let mut content = BigRational::zero();
    for (e, c) in &p.terms {
        for (m, &d) in common.iter_mut().zip(e) {
            *m = (*m).min(d);
        }
        content = rational_gcd(&content, c);
    }
    if p.terms.values().next().unwrap().is_negative() {
        content = -content;
    }
    if common.iter().any(|&d| d > 0) || !content.is_one() {
        let inner = SparsePoly::from_terms(
            p.names.clone(),
            p.terms.iter().map(|(e, c)| (e.iter().zip(&common).map(|(a, b)| a - b).collect(), c / &content)),
        );
        // the cofactor has content one by construction, so this recursion
        // goes straight to the split
        let mut factors = vec![monomial(content, &common)];
        factors.push(greedy_factor(&inner));
        return Expr::product(factors);
    }

    if let Some((f, g)) = p.split_factor() {
        return lift_sign(Expr::product(vec![greedy_factor(&f), greedy_factor(&g)]));
    }

    // most frequent x^d, counting terms whose exponent of x is exactly d;
    // ties go to the lowest variable index, then the lowest degree
    let mut counts: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    for e in p.terms.keys() {
        for (v, &d) in e.iter().enumerate() {
            if d > 0 {
                *counts.entry((v, d)).or_default() += 1;
            }
        }
    }
    let (&(v, d), _) = counts.iter().max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0))).expect("non-constant polynomial");

    let mut f = SparsePoly::zero(p.names.clone());
    let mut g = SparsePoly::zero(p.names.clone());
    for (e, c) in &p.terms {
        if e[v] >= d {
            let mut q = e.clone();
            q[v] -= d;
            f.add_term(q, c.clone());
        } else {
            g.add_term(e.clone(), c.clone());
        }
    }
    let mut power = vec![0; n];
    power[v] = d;
    let head = Expr::product(vec![monomial(BigRational::one(), &power), greedy_factor(&f)]);
    let head = lift_sign(head);
    if g.is_empty() {
        head
    } else {
        flatten_sum(vec![head, greedy_factor(&g)])
    }
}

/// Moves a negative content of the trailing factor to the front, so that
/// x·(−1·y) prints as −1·x·y.
fn lift_sign(e: Expr) -> Expr {
    if let Expr::Mul(xs) = &e {
        let mut consts = Vec::new();
        let mut rest = Vec::new();
        for x in xs {
            match x {
                Expr::Const(c) => consts.push(c.clone()),
                Expr::Mul(inner) => {
                    for y in inner {
                        match y {
                            Expr::Const(c) => consts.push(c.clone()),
                            other => rest.push(other.clone()),
                        }
                    }
                }
                other => rest.push(other.clone()),
            }
        }
        let k = consts.iter().fold(BigRational::one(), |a, c| a * c);
        let mut out = vec![Expr::Const(k)];
        out.extend(rest);
        return Expr::product(out);
    }
    e
}

fn flatten_sum(parts: Vec<Expr>) -> Expr {
    let mut flat = Vec::new();
    for p in parts {
        match p {
            Expr::Add(inner) => flat.extend(inner),
            other => flat.push(other),
        }
    }
    Expr::sum(flat)
}

/// Exact check that `e` expands to `p`.
pub fn expand_verify(e: &Expr, p: &SparsePoly) -> bool {
    e.max_var().is_none_or(|v| v < p.nvars()) && e.expand(p.names()) == *p
}

/// Parses a polynomial and returns it expanded.
pub fn parse_poly(text: &str) -> Result<SparsePoly, ParseError> {
    let (expr, names) = parse_expr(text)?;
    Ok(expr.expand(&names))
}

/// Rewrites every polynomial in `text`, one per non-empty line.
pub fn rewrite(text: &str) -> Result<Vec<Rewrite>, ParseError> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|line| {
            let p = parse_poly(line)?;
            let tree = greedy_factor(&p);
            let verified = expand_verify(&tree, &p);
            Ok(Rewrite { before: p.naive_tree().occurrences(), after: tree.occurrences(), text: tree.display(p.names()).to_string(), verified })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Rewrite {
    pub before: usize,
    pub after: usize,
    pub text: String,
    pub verified: bool,
}

impl fmt::Display for Rewrite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t# occurrences {} -> {}", self.text, self.before, self.after)
    }
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
