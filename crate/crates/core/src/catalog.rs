//! Named groups and the textual group descriptor.
//!
//! Descriptor grammar:
//!
//! ```text
//! d := "sym:"N | "alt:"N | "cyc:"N | "dih:"N | "prod(" d "," d ")" | "gens:"N":" perm (";" perm)*
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Limits};
use crate::perm::{all_perms_on, Perm};

/// Largest `|T|!/2` that [`alt_on_subset`] will realize.
pub const ALT_REALIZATION_CAP: u64 = 181_440;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    Sym(usize),
    Alt(usize),
    Cyc(usize),
    Dih(usize),
    Prod(Box<GroupDescriptor>, Box<GroupDescriptor>),
    Gens { degree: usize, generators: Vec<Perm> },
}

impl GroupDescriptor {
    pub fn degree(&self) -> usize {
        match self {
            GroupDescriptor::Sym(n)
            | GroupDescriptor::Alt(n)
            | GroupDescriptor::Cyc(n)
            | GroupDescriptor::Dih(n) => *n,
            GroupDescriptor::Prod(a, b) => a.degree() + b.degree(),
            GroupDescriptor::Gens { degree, .. } => *degree,
        }
    }

    /// Order implied by the descriptor, when known without enumeration.
    pub fn expected_order(&self) -> Option<u64> {
        match self {
            GroupDescriptor::Sym(n) => Some(factorial(*n)),
            GroupDescriptor::Alt(n) => Some((factorial(*n) / 2).max(1)),
            GroupDescriptor::Cyc(n) => Some(*n as u64),
            GroupDescriptor::Dih(n) => Some(2 * *n as u64),
            GroupDescriptor::Prod(a, b) => Some(a.expected_order()?.checked_mul(b.expected_order()?)?),
            GroupDescriptor::Gens { .. } => None,
        }
    }

    /// File-name-safe form of the canonical string.
    pub fn sanitized(&self) -> String {
        self.to_string()
            .chars()
            .map(|c| match c {
                'a'..='z' | 'A'..='Z' | '0'..='9' | '-' | '_' => c,
                _ => '_',
            })
            .collect()
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Sym(n) => write!(f, "sym:{n}"),
            GroupDescriptor::Alt(n) => write!(f, "alt:{n}"),
            GroupDescriptor::Cyc(n) => write!(f, "cyc:{n}"),
            GroupDescriptor::Dih(n) => write!(f, "dih:{n}"),
            GroupDescriptor::Prod(a, b) => write!(f, "prod({a},{b})"),
            GroupDescriptor::Gens { degree, generators } => {
                write!(f, "gens:{degree}:")?;
                let parts: Vec<String> = generators.iter().map(Perm::to_cycle_string).collect();
                f.write_str(&parts.join(";"))
            }
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_descriptor(s)
    }
}

pub fn parse_descriptor(text: &str) -> Result<GroupDescriptor> {
    let mut parser = Parser { input: text, pos: 0 };
    let d = parser.descriptor()?;
    parser.skip_ws();
    if parser.pos != text.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(d)
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> Error {
        Error::Parse {
            input: self.input.to_string(),
            reason: format!("{reason} at offset {}", self.pos),
        }
    }

    fn rest(&self) -> &str {
        &self.input[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.input.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| self.error("number too large"))
    }

    fn descriptor(&mut self) -> Result<GroupDescriptor> {
        if self.eat("sym:") {
            return Ok(GroupDescriptor::Sym(self.positive()?));
        }
        if self.eat("alt:") {
            return Ok(GroupDescriptor::Alt(self.positive()?));
        }
        if self.eat("cyc:") {
            return Ok(GroupDescriptor::Cyc(self.positive()?));
        }
        if self.eat("dih:") {
            let n = self.number()?;
            if n < 3 {
                return Err(self.error("dihedral degree must be at least 3"));
            }
            return Ok(GroupDescriptor::Dih(n));
        }
        if self.eat("prod(") {
            let a = self.descriptor()?;
            if !self.eat(",") {
                return Err(self.error("expected ','"));
            }
            let b = self.descriptor()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(GroupDescriptor::Prod(Box::new(a), Box::new(b)));
        }
        if self.eat("gens:") {
            let degree = self.positive()?;
            if !self.eat(":") {
                return Err(self.error("expected ':'"));
            }
            let mut generators = vec![self.perm(degree)?];
            while self.eat(";") {
                generators.push(self.perm(degree)?);
            }
            return Ok(GroupDescriptor::Gens { degree, generators });
        }
        Err(self.error("unknown group kind"))
    }

    fn positive(&mut self) -> Result<usize> {
        let n = self.number()?;
        if n == 0 {
            return Err(self.error("degree must be positive"));
        }
        Ok(n)
    }

    /// Consumes a run of parenthesized cycles.
    fn perm(&mut self, degree: usize) -> Result<Perm> {
        self.skip_ws();
        let start = self.pos;
        loop {
            self.skip_ws();
            if !self.rest().starts_with('(') {
                break;
            }
            let close = self
                .rest()
                .find(')')
                .ok_or_else(|| self.error("unclosed '('"))?;
            self.pos += close + 1;
        }
        if start == self.pos {
            return Err(self.error("expected a permutation"));
        }
        Perm::parse_cycles(&self.input[start..self.pos], degree)
    }
}

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn check_limits(d: &GroupDescriptor, limits: &Limits) -> Result<()> {
    if d.degree() > limits.max_degree {
        return Err(Error::CapExceeded {
            what: "degree",
            limit: limits.max_degree as u64,
            actual: d.degree() as u64,
        });
    }
    if let Some(order) = d.expected_order() {
        if order > limits.max_order {
            return Err(Error::CapExceeded {
                what: "group order",
                limit: limits.max_order,
                actual: order,
            });
        }
    }
    Ok(())
}

pub fn symmetric(n: usize, limits: &Limits) -> Result<FiniteGroup> {
    let d = GroupDescriptor::Sym(n);
    check_limits(&d, limits)?;
    let points: Vec<usize> = (1..=n).collect();
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Perm::cycle(n, &points)?);
        gens.push(Perm::cycle(n, &[1, 2])?);
    }
    let elements = all_perms_on(n, &points);
    Ok(FiniteGroup::from_elements(d, n, gens, elements))
}

pub fn alternating(n: usize, limits: &Limits) -> Result<FiniteGroup> {
    let d = GroupDescriptor::Alt(n);
    check_limits(&d, limits)?;
    let points: Vec<usize> = (1..=n).collect();
    let gens = alt_generators(n, &points)?;
    let elements = all_perms_on(n, &points)
        .into_iter()
        .filter(Perm::is_even)
        .collect();
    Ok(FiniteGroup::from_elements(d, n, gens, elements))
}

/// 3-cycles `(t1 t2 ti)` generating `Alt_T`.
fn alt_generators(degree: usize, points: &[usize]) -> Result<Vec<Perm>> {
    let mut gens = Vec::new();
    for &third in points.iter().skip(2) {
        gens.push(Perm::cycle(degree, &[points[0], points[1], third])?);
    }
    Ok(gens)
}

pub fn cyclic(n: usize, limits: &Limits) -> Result<FiniteGroup> {
    let d = GroupDescriptor::Cyc(n);
    check_limits(&d, limits)?;
    let gens = if n >= 2 {
        vec![Perm::cycle(n, &(1..=n).collect::<Vec<_>>())?]
    } else {
        Vec::new()
    };
    FiniteGroup::generate(d, n, gens, limits.max_order)
}

/// Symmetries of a regular `n`-gon on its `n` vertices.
pub fn dihedral(n: usize, limits: &Limits) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::Precondition(format!("dihedral group needs n >= 3, got {n}")));
    }
    let d = GroupDescriptor::Dih(n);
    check_limits(&d, limits)?;
    let rotation = Perm::cycle(n, &(1..=n).collect::<Vec<_>>())?;
    let reflection = Perm::from_images(&(1..=n).map(|i| n + 1 - i).collect::<Vec<_>>())?;
    FiniteGroup::generate(d, n, vec![rotation, reflection], limits.max_order)
}

/// `A × B` acting on disjoint blocks `{1..a}` and `{a+1..a+b}`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, limits: &Limits) -> Result<FiniteGroup> {
    let d = GroupDescriptor::Prod(Box::new(a.descriptor().clone()), Box::new(b.descriptor().clone()));
    let degree = a.degree() + b.degree();
    if degree > limits.max_degree {
        return Err(Error::CapExceeded {
            what: "degree",
            limit: limits.max_degree as u64,
            actual: degree as u64,
        });
    }
    let order = a.order() * b.order();
    if order > limits.max_order {
        return Err(Error::CapExceeded {
            what: "group order",
            limit: limits.max_order,
            actual: order,
        });
    }
    let left: Vec<Perm> = a
        .elements()
        .iter()
        .map(|g| g.shifted(0, degree))
        .collect::<Result<_>>()?;
    let right: Vec<Perm> = b
        .elements()
        .iter()
        .map(|g| g.shifted(a.degree(), degree))
        .collect::<Result<_>>()?;
    let mut gens: Vec<Perm> = a.generators().iter().map(|g| g.shifted(0, degree)).collect::<Result<_>>()?;
    for g in b.generators() {
        gens.push(g.shifted(a.degree(), degree)?);
    }
    let mut elements = Vec::with_capacity(order as usize);
    for x in &left {
        for y in &right {
            elements.push(x.compose_unchecked(y));
        }
    }
    Ok(FiniteGroup::from_elements(d, degree, gens, elements))
}

/// `Alt_T` inside `Alt_X`, `X = {1..x_degree}`, fixing `X \ T` pointwise.
pub fn alt_on_subset(x_degree: usize, support: &[usize]) -> Result<FiniteGroup> {
    let mut points = support.to_vec();
    points.sort_unstable();
    points.dedup();
    if points.len() != support.len() {
        return Err(Error::RepeatedPoint(
            *support.iter().find(|p| support.iter().filter(|q| q == p).count() > 1).unwrap(),
        ));
    }
    for &pt in &points {
        if pt == 0 || pt > x_degree {
            return Err(Error::PointOutOfRange { point: pt, degree: x_degree });
        }
    }
    let order = (factorial(points.len()) / 2).max(1);
    if order > ALT_REALIZATION_CAP {
        return Err(Error::CapExceeded {
            what: "alternating subgroup order",
            limit: ALT_REALIZATION_CAP,
            actual: order,
        });
    }
    let mut gens = alt_generators(x_degree, &points)?;
    if gens.is_empty() {
        gens.push(Perm::identity(x_degree)?);
    }
    let elements = all_perms_on(x_degree, &points)
        .into_iter()
        .filter(Perm::is_even)
        .collect();
    let d = GroupDescriptor::Gens {
        degree: x_degree,
        generators: gens.clone(),
    };
    Ok(FiniteGroup::from_elements(d, x_degree, gens, elements))
}

/// Builds the permutation group a descriptor names.
pub fn realize(d: &GroupDescriptor, limits: &Limits) -> Result<FiniteGroup> {
    check_limits(d, limits)?;
    match d {
        GroupDescriptor::Sym(n) => symmetric(*n, limits),
        GroupDescriptor::Alt(n) => alternating(*n, limits),
        GroupDescriptor::Cyc(n) => cyclic(*n, limits),
        GroupDescriptor::Dih(n) => dihedral(*n, limits),
        GroupDescriptor::Prod(a, b) => {
            let a = realize(a, limits)?;
            let b = realize(b, limits)?;
            direct_product(&a, &b, limits)
        }
        GroupDescriptor::Gens { degree, generators } => {
            FiniteGroup::generate(d.clone(), *degree, generators.clone(), limits.max_order)
        }
    }
}
