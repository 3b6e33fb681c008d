//! Node and unit identifiers.
//!
//! A node is named by the ring it sits on, its letter inside the unit, the
//! unit's position in the cell and the cell number. The canonical text form
//! is dot-delimited (`o.f.3.3`); the compact form (`of33`, `ih2`) is accepted
//! on input when both indices are single digits.

use crate::error::ParseError;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which ring of the unit cell a unit belongs to. Switch fabrics use `Switch`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Circle {
    Inner,
    Outer,
    Switch,
}

impl Circle {
    pub fn as_char(self) -> char {
        match self {
            Circle::Inner => 'i',
            Circle::Outer => 'o',
            Circle::Switch => 's',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'i' => Some(Circle::Inner),
            'o' => Some(Circle::Outer),
            's' => Some(Circle::Switch),
            _ => None,
        }
    }
}

/// Node letter inside a unit: `a..d` are primary, `e..h` are dummy ports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl Letter {
    pub const ALL: [Letter; 8] = [
        Letter::A,
        Letter::B,
        Letter::C,
        Letter::D,
        Letter::E,
        Letter::F,
        Letter::G,
        Letter::H,
    ];

    pub fn as_char(self) -> char {
        (b'a' + self as u8) as char
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='h' => Some(Letter::ALL[(c as u8 - b'a') as usize]),
            _ => None,
        }
    }

    pub fn is_primary(self) -> bool {
        (self as u8) < 4
    }

    pub fn is_dummy(self) -> bool {
        !self.is_primary()
    }

    /// `a` and `b` sit on the input side of the coupler.
    pub fn is_input_side(self) -> bool {
        matches!(self, Letter::A | Letter::B)
    }

    pub fn is_output_side(self) -> bool {
        matches!(self, Letter::C | Letter::D)
    }

    /// The dummy port attached to a primary node, or the primary behind a port.
    pub fn partner(self) -> Letter {
        Letter::ALL[(self as usize + 4) % 8]
    }
}

/// Identity of one MZI unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct UnitId {
    pub cell: u32,
    pub unit: u32,
    pub circle: Circle,
}

impl UnitId {
    pub fn new(circle: Circle, unit: u32, cell: u32) -> Self {
        UnitId { cell, unit, circle }
    }

    pub fn node(self, letter: Letter) -> NodeId {
        NodeId {
            cell: self.cell,
            unit: self.unit,
            circle: self.circle,
            letter,
        }
    }

    /// All eight nodes in letter order `a..h`.
    pub fn nodes(self) -> [NodeId; 8] {
        Letter::ALL.map(|l| self.node(l))
    }
}

impl fmt::Display for UnitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.circle.as_char(), self.unit, self.cell)
    }
}

impl FromStr for UnitId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parts: Vec<&str> = s.split('.').collect();
        let (c, unit, cell) = match parts.as_slice() {
            [c, u, q] => (*c, *u, *q),
            [c, u] => (*c, *u, "0"),
            _ => {
                // compact "o33" / "i2"
                let mut chars = s.chars();
                let c = chars.next().ok_or(ParseError::Empty)?;
                let rest: String = chars.collect();
                return match rest.len() {
                    1 | 2 => {
                        let circle = Circle::from_char(c).ok_or_else(|| ParseError::Circle(c.to_string()))?;
                        let unit = parse_digit(&rest[..1], ParseError::UnitIndex)?;
                        let cell = if rest.len() == 2 {
                            parse_digit(&rest[1..], ParseError::CellIndex)?
                        } else {
                            0
                        };
                        Ok(UnitId::new(circle, unit, cell))
                    }
                    _ => Err(ParseError::Malformed(s.to_string())),
                };
            }
        };
        let mut cs = c.chars();
        let circle = match (cs.next(), cs.next()) {
            (Some(ch), None) => Circle::from_char(ch),
            _ => None,
        }
        .ok_or_else(|| ParseError::Circle(c.to_string()))?;
        let unit = unit.parse().map_err(|_| ParseError::UnitIndex(unit.to_string()))?;
        let cell = cell.parse().map_err(|_| ParseError::CellIndex(cell.to_string()))?;
        Ok(UnitId::new(circle, unit, cell))
    }
}

impl From<UnitId> for String {
    fn from(u: UnitId) -> String {
        u.to_string()
    }
}

impl TryFrom<String> for UnitId {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Structured node identifier.
///
/// Field order gives the canonical ordering used for deterministic neighbour
/// expansion and for picking the surviving name when nodes merge: lower
/// `(cell, unit)` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct NodeId {
    pub cell: u32,
    pub unit: u32,
    pub circle: Circle,
    pub letter: Letter,
}

impl NodeId {
    pub fn new(circle: Circle, letter: Letter, unit: u32, cell: u32) -> Self {
        NodeId {
            cell,
            unit,
            circle,
            letter,
        }
    }

    pub fn unit_id(&self) -> UnitId {
        UnitId::new(self.circle, self.unit, self.cell)
    }

    pub fn is_primary(&self) -> bool {
        self.letter.is_primary()
    }

    pub fn is_dummy(&self) -> bool {
        self.letter.is_dummy()
    }

    /// Parses either the canonical `c.l.unit.cell` form or the compact form.
    ///
    /// A compact name with three characters (`ih2`) refers to cell 0.
    pub fn parse(text: &str) -> Result<NodeId, ParseError> {
        let s = text.trim();
        if s.is_empty() {
            return Err(ParseError::Empty);
        }
        if s.contains('.') {
            let parts: Vec<&str> = s.split('.').collect();
            let (c, l, u, q) = match parts.as_slice() {
                [c, l, u, q] => (*c, *l, *u, *q),
                [c, l, u] => (*c, *l, *u, "0"),
                _ => return Err(ParseError::Malformed(s.to_string())),
            };
            let circle = single_char(c)
                .and_then(Circle::from_char)
                .ok_or_else(|| ParseError::Circle(c.to_string()))?;
            let letter = single_char(l)
                .and_then(Letter::from_char)
                .ok_or_else(|| ParseError::Letter(l.to_string()))?;
            let unit = u.parse::<u32>().map_err(|_| ParseError::UnitIndex(u.to_string()))?;
            let cell = q.parse::<u32>().map_err(|_| ParseError::CellIndex(q.to_string()))?;
            return Ok(NodeId::new(circle, letter, unit, cell));
        }

        let chars: Vec<char> = s.chars().collect();
        if chars.len() < 3 {
            return Err(ParseError::Malformed(s.to_string()));
        }
        let circle = Circle::from_char(chars[0]).ok_or_else(|| ParseError::Circle(chars[0].to_string()))?;
        let letter = Letter::from_char(chars[1]).ok_or_else(|| ParseError::Letter(chars[1].to_string()))?;
        let digits: String = chars[2..].iter().collect();
        match digits.len() {
            1 | 2 => {
                let unit = parse_digit(&digits[..1], ParseError::UnitIndex)?;
                let cell = if digits.len() == 2 {
                    parse_digit(&digits[1..], ParseError::CellIndex)?
                } else {
                    0
                };
                Ok(NodeId::new(circle, letter, unit, cell))
            }
            _ if digits.chars().all(|c| c.is_ascii_digit()) => Err(ParseError::Ambiguous(s.into())),
            _ => Err(ParseError::UnitIndex(digits)),
        }
    }

    /// Compact form, when both indices are single digits.
    pub fn compact(&self) -> Option<String> {
        (self.unit < 10 && self.cell < 10).then(|| {
            format!(
                "{}{}{}{}",
                self.circle.as_char(),
                self.letter.as_char(),
                self.unit,
                self.cell
            )
        })
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

fn parse_digit(s: &str, err: fn(String) -> ParseError) -> Result<u32, ParseError> {
    s.parse::<u32>().map_err(|_| err(s.to_string()))
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{}.{}.{}",
            self.circle.as_char(),
            self.letter.as_char(),
            self.unit,
            self.cell
        )
    }
}

impl FromStr for NodeId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeId::parse(s)
    }
}

impl From<NodeId> for String {
    fn from(n: NodeId) -> String {
        n.to_string()
    }
}

impl TryFrom<String> for NodeId {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        NodeId::parse(&s)
    }
}

/// Convenience for tests and examples: `node("of33")`.
///
/// # Panics
/// Panics on malformed input.
pub fn node(text: &str) -> NodeId {
    NodeId::parse(text).unwrap_or_else(|e| panic!("bad node name {text:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn compact_short_form() {
        let n = NodeId::parse("of33").unwrap();
        assert_eq!(n, NodeId::new(Circle::Outer, Letter::F, 3, 3));
        assert_eq!(n.to_string(), "o.f.3.3");
        assert_eq!(n.compact().as_deref(), Some("of33"));
    }

    #[test]
    fn three_char_name_defaults_to_cell_zero() {
        let n = NodeId::parse("ih2").unwrap();
        assert_eq!(n.to_string(), "i.h.2.0");
        assert_eq!(NodeId::parse(&n.to_string()).unwrap(), n);
    }

    #[test]
    fn bad_letter_is_named() {
        assert_eq!(NodeId::parse("oz99"), Err(ParseError::Letter("z".to_string())));
        assert_eq!(NodeId::parse("x.a.1.1"), Err(ParseError::Circle("x".to_string())));
        assert!(matches!(NodeId::parse("o.a.x.1"), Err(ParseError::UnitIndex(_))));
    }

    #[test]
    fn multi_digit_compact_is_ambiguous() {
        assert!(matches!(NodeId::parse("of111"), Err(ParseError::Ambiguous(_))));
        assert_eq!(
            NodeId::parse("o.f.11.1").unwrap(),
            NodeId::new(Circle::Outer, Letter::F, 11, 1)
        );
    }

    #[test]
    fn letter_roles() {
        assert!(Letter::A.is_primary() && Letter::D.is_primary());
        assert!(Letter::E.is_dummy() && Letter::H.is_dummy());
        assert_eq!(Letter::A.partner(), Letter::E);
        assert_eq!(Letter::H.partner(), Letter::D);
    }

    #[test]
    fn unit_id_text() {
        let u: UnitId = "o.3.3".parse().unwrap();
        assert_eq!(u, UnitId::new(Circle::Outer, 3, 3));
        assert_eq!("i2".parse::<UnitId>().unwrap(), UnitId::new(Circle::Inner, 2, 0));
        assert_eq!(u.to_string().parse::<UnitId>().unwrap(), u);
    }

    fn any_node() -> impl Strategy<Value = NodeId> {
        (0usize..3, 0usize..8, 0u32..500, 0u32..500).prop_map(|(c, l, u, q)| {
            let circle = [Circle::Inner, Circle::Outer, Circle::Switch][c];
            NodeId::new(circle, Letter::ALL[l], u, q)
        })
    }

    proptest! {
        #[test]
        fn canonical_round_trip(n in any_node()) {
            prop_assert_eq!(NodeId::parse(&n.to_string()).unwrap(), n);
            if let Some(c) = n.compact() {
                prop_assert_eq!(NodeId::parse(&c).unwrap(), n);
            }
        }
    }
}
