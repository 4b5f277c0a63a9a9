use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::LogicError;

/// A constant symbol. Cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Constant(Arc<str>);

impl Constant {
    pub fn new(name: &str) -> Self {
        Constant(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Constant {
    fn from(s: &str) -> Self {
        Constant::new(s)
    }
}

impl From<String> for Constant {
    fn from(s: String) -> Self {
        Constant(Arc::from(s))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `pred(c1, ..., cn)` with only constants as arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    predicate: Arc<str>,
    args: Vec<Constant>,
}

impl GroundAtom {
    pub fn new(predicate: &str, args: Vec<Constant>) -> Self {
        GroundAtom {
            predicate: Arc::from(predicate),
            args,
        }
    }

    /// Convenience constructor from string slices.
    pub fn of(predicate: &str, args: &[&str]) -> Self {
        GroundAtom::new(predicate, args.iter().map(|a| Constant::new(a)).collect())
    }

    pub fn predicate(&self) -> &str {
        &self.predicate
    }

    pub fn args(&self) -> &[Constant] {
        &self.args
    }

    fn key_cmp(&self, predicate: &str, args: &[Constant]) -> std::cmp::Ordering {
        (*self.predicate)
            .cmp(predicate)
            .then_with(|| self.args.as_slice().cmp(args))
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// A possible world `(atoms, domain)`: every ground atom over `domain` that is
/// not listed is false.
///
/// Atoms and domain are kept sorted, so derived equality is structural. An
/// incidence index (atoms per domain position) makes induced fragments cheap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationalExample {
    atoms: Vec<GroundAtom>,
    domain: Vec<Constant>,
    // atom indices keyed by the smallest domain position among their arguments
    incidence: Vec<Vec<u32>>,
    // per atom: sorted domain positions of its arguments
    positions: Vec<Vec<u32>>,
}

impl RelationalExample {
    /// Builds an example, rejecting duplicate atoms or constants and atoms
    /// that mention constants outside the domain.
    pub fn new<A, C>(atoms: A, domain: C) -> Result<Self, LogicError>
    where
        A: IntoIterator<Item = GroundAtom>,
        C: IntoIterator,
        C::Item: Into<Constant>,
    {
        let mut dom: Vec<Constant> = domain.into_iter().map(Into::into).collect();
        dom.sort();
        if let Some(w) = dom.windows(2).find(|w| w[0] == w[1]) {
            return Err(LogicError::DuplicateConstant(w[0].to_string()));
        }
        let mut atoms: Vec<GroundAtom> = atoms.into_iter().collect();
        atoms.sort();
        if let Some(w) = atoms.windows(2).find(|w| w[0] == w[1]) {
            return Err(LogicError::DuplicateAtom(w[0].to_string()));
        }
        for atom in &atoms {
            for c in atom.args() {
                if dom.binary_search(c).is_err() {
                    return Err(LogicError::ConstantOutsideDomain {
                        atom: atom.to_string(),
                        constant: c.to_string(),
                    });
                }
            }
        }
        Ok(Self::from_sorted(atoms, dom))
    }

    /// `atoms` and `domain` must already be sorted, unique and consistent.
    fn from_sorted(atoms: Vec<GroundAtom>, domain: Vec<Constant>) -> Self {
        let mut incidence = vec![Vec::new(); domain.len()];
        let mut positions = Vec::with_capacity(atoms.len());
        for (ai, atom) in atoms.iter().enumerate() {
            let mut pos: Vec<u32> = atom
                .args()
                .iter()
                .map(|c| domain.binary_search(c).expect("atom constant in domain") as u32)
                .collect();
            pos.sort_unstable();
            pos.dedup();
            if let Some(&first) = pos.first() {
                incidence[first as usize].push(ai as u32);
            }
            positions.push(pos);
        }
        RelationalExample {
            atoms,
            domain,
            incidence,
            positions,
        }
    }

    pub fn empty() -> Self {
        Self::from_sorted(Vec::new(), Vec::new())
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn domain(&self) -> &[Constant] {
        &self.domain
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.holds(atom.predicate(), atom.args())
    }

    /// Closed-world truth value of `predicate(args)`.
    pub fn holds(&self, predicate: &str, args: &[Constant]) -> bool {
        self.atoms.binary_search_by(|a| a.key_cmp(predicate, args)).is_ok()
    }

    pub fn position_of(&self, c: &Constant) -> Option<usize> {
        self.domain.binary_search(c).ok()
    }

    /// The fragment induced by a set of constants; errors if any of them is
    /// outside the domain.
    pub fn fragment(&self, subset: &BTreeSet<Constant>) -> Result<Self, LogicError> {
        let idx = subset
            .iter()
            .map(|c| self.position_of(c).ok_or_else(|| LogicError::NotASubset(c.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        // BTreeSet iteration is sorted, and positions preserve order
        Ok(self.fragment_by_positions(&idx))
    }

    /// Fragment induced by the domain positions `subset` (strictly increasing).
    pub fn fragment_by_positions(&self, subset: &[usize]) -> Self {
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        let mut picked: Vec<u32> = Vec::new();
        for &p in subset {
            for &ai in &self.incidence[p] {
                let inside = self.positions[ai as usize]
                    .iter()
                    .all(|q| subset.binary_search(&(*q as usize)).is_ok());
                if inside {
                    picked.push(ai);
                }
            }
        }
        // nullary atoms survive every restriction
        picked.extend(
            self.positions
                .iter()
                .enumerate()
                .filter(|(_, p)| p.is_empty())
                .map(|(i, _)| i as u32),
        );
        picked.sort_unstable();
        let atoms = picked.into_iter().map(|i| self.atoms[i as usize].clone()).collect();
        let domain = subset.iter().map(|&p| self.domain[p].clone()).collect();
        Self::from_sorted(atoms, domain)
    }

    /// Number of atoms with the given predicate, or all atoms when `None`.
    pub fn count_atoms(&self, predicate: Option<&str>) -> usize {
        match predicate {
            None => self.atoms.len(),
            Some(p) => self.atoms.iter().filter(|a| a.predicate() == p).count(),
        }
    }

    /// Parses the line-oriented text format:
    ///
    /// ```text
    /// # comment
    /// domain: alice bob eve
    /// fr(alice,bob)
    /// sm(alice)
    /// ```
    pub fn parse_text(text: &str) -> Result<Self, LogicError> {
        let mut domain: Option<Vec<Constant>> = None;
        let mut atoms: Vec<(usize, GroundAtom)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let fail = |message: String| LogicError::ExampleFormat { line: lineno, message };
            if domain.is_none() {
                let rest = line
                    .strip_prefix("domain:")
                    .ok_or_else(|| fail("expected `domain: c1 c2 ...` first".into()))?;
                let consts = rest
                    .split_whitespace()
                    .map(|c| {
                        if is_constant_name(c) {
                            Ok(Constant::new(c))
                        } else {
                            Err(fail(format!("invalid constant `{c}`")))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                domain = Some(consts);
                continue;
            }
            atoms.push((lineno, parse_ground_atom(line).map_err(fail)?));
        }
        let domain = domain.ok_or(LogicError::ExampleFormat {
            line: 0,
            message: "missing `domain:` line".into(),
        })?;
        let mut arities = std::collections::BTreeMap::new();
        for (lineno, atom) in &atoms {
            let arity = *arities.entry(atom.predicate().to_string()).or_insert(atom.args().len());
            if arity != atom.args().len() {
                return Err(LogicError::ExampleFormat {
                    line: *lineno,
                    message: format!("predicate `{}` used with two arities", atom.predicate()),
                });
            }
        }
        Self::new(atoms.into_iter().map(|(_, a)| a), domain)
    }

    /// Renders the text format accepted by [`RelationalExample::parse_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::from("domain:");
        for c in &self.domain {
            out.push(' ');
            out.push_str(c.as_str());
        }
        out.push('\n');
        for a in &self.atoms {
            out.push_str(&a.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for RelationalExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("({")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}, {")?;
        for (i, c) in self.domain.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("})")
    }
}

pub(crate) fn is_constant_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_ground_atom(line: &str) -> Result<GroundAtom, String> {
    let open = line
        .find('(')
        .ok_or_else(|| format!("expected `pred(c1,...)`, got `{line}`"))?;
    let pred = line[..open].trim();
    if !is_constant_name(pred) || pred.starts_with(|c: char| c.is_ascii_digit()) {
        return Err(format!("invalid predicate name `{pred}`"));
    }
    let inner = line[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| format!("missing `)` in `{line}`"))?;
    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|a| {
                let a = a.trim();
                if is_constant_name(a) {
                    Ok(Constant::new(a))
                } else {
                    Err(format!("invalid constant `{a}`"))
                }
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok(GroundAtom::new(pred, args))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> RelationalExample {
        RelationalExample::new(
            [
                GroundAtom::of("fr", &["alice", "bob"]),
                GroundAtom::of("fr", &["bob", "alice"]),
                GroundAtom::of("fr", &["bob", "eve"]),
                GroundAtom::of("fr", &["eve", "bob"]),
                GroundAtom::of("sm", &["alice"]),
            ],
            ["alice", "bob", "eve"],
        )
        .unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<Constant> {
        names.iter().map(|n| Constant::new(n)).collect()
    }

    #[test]
    fn fragment_on_alice_bob() {
        let frag = example1().fragment(&set(&["alice", "bob"])).unwrap();
        let expected = RelationalExample::new(
            [
                GroundAtom::of("sm", &["alice"]),
                GroundAtom::of("fr", &["alice", "bob"]),
                GroundAtom::of("fr", &["bob", "alice"]),
            ],
            ["alice", "bob"],
        )
        .unwrap();
        assert_eq!(frag, expected);
    }

    #[test]
    fn fragment_identity_and_empty() {
        let ex = example1();
        assert_eq!(ex.fragment(&set(&["alice", "bob", "eve"])).unwrap(), ex);
        assert_eq!(ex.fragment(&BTreeSet::new()).unwrap(), RelationalExample::empty());
    }

    #[test]
    fn fragment_outside_domain_is_an_error() {
        let err = example1().fragment(&set(&["alice", "zed"])).unwrap_err();
        assert_eq!(err, LogicError::NotASubset("zed".into()));
    }

    #[test]
    fn rejects_bad_examples() {
        let dup = RelationalExample::new([GroundAtom::of("sm", &["a"]), GroundAtom::of("sm", &["a"])], ["a"]);
        assert!(matches!(dup, Err(LogicError::DuplicateAtom(_))));
        let outside = RelationalExample::new([GroundAtom::of("sm", &["b"])], ["a"]);
        assert!(matches!(outside, Err(LogicError::ConstantOutsideDomain { .. })));
    }

    #[test]
    fn text_format_round_trip() {
        let ex = example1();
        let text = ex.to_text();
        assert_eq!(RelationalExample::parse_text(&text).unwrap(), ex);
        let with_comments = "# friends\n\ndomain: a b\nedge(a,b) # one edge\nrain()\n";
        let parsed = RelationalExample::parse_text(with_comments).unwrap();
        assert_eq!(parsed.atoms().len(), 2);
        assert!(parsed.holds("rain", &[]));
    }

    #[test]
    fn text_format_errors() {
        assert!(RelationalExample::parse_text("edge(a,b)\n").is_err());
        let dup = RelationalExample::parse_text("domain: a b\nedge(a,b)\nedge(a,b)\n");
        assert!(matches!(dup, Err(LogicError::DuplicateAtom(_))));
        let arity = RelationalExample::parse_text("domain: a b\nedge(a,b)\nedge(a)\n");
        assert!(matches!(arity, Err(LogicError::ExampleFormat { line: 3, .. })));
    }

    #[test]
    fn nullary_atoms_survive_fragments() {
        let ex =
            RelationalExample::new([GroundAtom::of("rain", &[]), GroundAtom::of("sm", &["a"])], ["a", "b"]).unwrap();
        let frag = ex.fragment_by_positions(&[1]);
        assert_eq!(frag.atoms(), &[GroundAtom::of("rain", &[])]);
    }
}
