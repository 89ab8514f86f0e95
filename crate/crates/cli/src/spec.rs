//! Group and subset specifications.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use quasirandom::group::field::prime_power;
use quasirandom::group::matrix::MatrixKind;
use quasirandom::{seed, Error, Family, FiniteGroup, Result, SubsetMask};

/// A parsed group spec such as `PSL(2,7)`, `Alt(5)` or `table:k4.txt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec(pub Family);

fn parse_error(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn parse_params(text: &str, offset: usize, count: usize) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(count);
    let mut pos = offset;
    for part in text.split(',') {
        let trimmed = part.trim();
        let value = trimmed
            .parse::<u64>()
            .map_err(|_| parse_error(pos, format!("expected a non-negative integer, found `{trimmed}`")))?;
        out.push(value);
        pos += part.len() + 1;
    }
    if out.len() != count {
        return Err(parse_error(offset, format!("expected {count} parameter(s), found {}", out.len())));
    }
    Ok(out)
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let text = text.trim();
    if let Some(path) = text.strip_prefix("table:") {
        if path.is_empty() {
            return Err(parse_error(6, "missing table path"));
        }
        return Ok(GroupSpec(Family::Table(PathBuf::from(path))));
    }
    let open = text.find('(').ok_or_else(|| parse_error(text.len(), "expected `(`"))?;
    if !text.ends_with(')') {
        return Err(parse_error(text.len(), "expected `)` at the end"));
    }
    let name = &text[..open];
    let inner = &text[open + 1..text.len() - 1];
    let offset = open + 1;
    let one = |f: fn(usize) -> Family| -> Result<GroupSpec> {
        let m = parse_params(inner, offset, 1)?[0] as usize;
        if m == 0 {
            return Err(parse_error(offset, "parameter must be positive"));
        }
        Ok(GroupSpec(f(m)))
    };
    let linear = |kind: MatrixKind| -> Result<GroupSpec> {
        let p = parse_params(inner, offset, 2)?;
        if p[0] == 0 {
            return Err(parse_error(offset, "dimension must be positive"));
        }
        if prime_power(p[1]).is_none() {
            return Err(Error::NotPrimePower(p[1]));
        }
        Ok(GroupSpec(Family::linear(kind, p[0] as usize, p[1])))
    };
    match name {
        "C" | "cyclic" => one(Family::Cyclic),
        "D" | "dihedral" => one(Family::Dihedral),
        "Sym" | "symmetric" => one(Family::Symmetric),
        "Alt" | "alternating" => one(Family::Alternating),
        "GL" => linear(MatrixKind::GL),
        "SL" => linear(MatrixKind::SL),
        "PSL" => linear(MatrixKind::PSL),
        "SU" => linear(MatrixKind::SU),
        "PSU" => linear(MatrixKind::PSU),
        _ => Err(Error::UnsupportedFamily(name.to_string())),
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group_spec(s)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A subset of a group, described relative to its element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetSpec {
    All,
    List(Vec<usize>),
    /// Uniform subset of the given size.
    Random { size: usize, seed: u64 },
    /// Uniform inverse-closed subset of the given size.
    SymRandom { size: usize, seed: u64 },
    /// Left coset `rep·⟨gens⟩`.
    Coset { gens: Vec<usize>, rep: usize },
}

fn parse_list(text: &str, offset: usize) -> Result<Vec<usize>> {
    let text = text.trim_start_matches('[').trim_end_matches(']');
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut pos = offset;
    text.split(',')
        .map(|t| {
            let v = t
                .trim()
                .parse()
                .map_err(|_| parse_error(pos, format!("expected an element index, found `{}`", t.trim())));
            pos += t.len() + 1;
            v
        })
        .collect()
}

fn parse_field<T: FromStr>(text: &str, pos: usize, what: &str) -> Result<T> {
    text.parse().map_err(|_| parse_error(pos, format!("expected {what}, found `{text}`")))
}

pub fn parse_subset_spec(text: &str) -> Result<SubsetSpec> {
    let text = text.trim();
    if text == "all" {
        return Ok(SubsetSpec::All);
    }
    let parts: Vec<&str> = text.split(':').collect();
    let sized = |parts: &[&str]| -> Result<(usize, u64)> {
        if parts.len() != 3 {
            return Err(parse_error(0, format!("expected `{}:<size>:<seed>`", parts[0])));
        }
        let size = parse_field(parts[1], parts[0].len() + 1, "a size")?;
        let seed = parse_field(parts[2], parts[0].len() + parts[1].len() + 2, "a seed")?;
        Ok((size, seed))
    };
    match parts[0] {
        "random" => sized(&parts).map(|(size, seed)| SubsetSpec::Random { size, seed }),
        "symrandom" => sized(&parts).map(|(size, seed)| SubsetSpec::SymRandom { size, seed }),
        "coset" => {
            if parts.len() != 3 {
                return Err(parse_error(0, "expected `coset:<generators>:<representative>`"));
            }
            Ok(SubsetSpec::Coset {
                gens: parse_list(parts[1], 6)?,
                rep: parse_field(parts[2], 7 + parts[1].len(), "an element index")?,
            })
        }
        _ if parts.len() == 1 => parse_list(text, 0).map(SubsetSpec::List),
        other => Err(parse_error(0, format!("unknown subset kind `{other}`"))),
    }
}

impl SubsetSpec {
    /// Same spec with the seed of a random kind replaced by a per-trial child seed.
    pub fn for_trial(&self, trial: u64) -> SubsetSpec {
        match self {
            SubsetSpec::Random { size, seed: s } => SubsetSpec::Random {
                size: *size,
                seed: seed::derive(*s, &[trial]),
            },
            SubsetSpec::SymRandom { size, seed: s } => SubsetSpec::SymRandom {
                size: *size,
                seed: seed::derive(*s, &[trial]),
            },
            other => other.clone(),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, SubsetSpec::Random { .. } | SubsetSpec::SymRandom { .. })
    }

    pub fn resolve(&self, group: &FiniteGroup) -> Result<SubsetMask> {
        let n = group.order();
        match self {
            SubsetSpec::All => Ok(SubsetMask::full(n)),
            SubsetSpec::List(v) => SubsetMask::from_indices(n, v.iter().copied()),
            SubsetSpec::Random { size, seed: s } => SubsetMask::random(n, *size, &mut seed::rng(*s)),
            SubsetSpec::SymRandom { size, seed: s } => SubsetMask::random_symmetric(group, *size, &mut seed::rng(*s)),
            SubsetSpec::Coset { gens, rep } => {
                for &g in gens.iter().chain([rep]) {
                    group.check(g)?;
                }
                Ok(group.closure(gens).left_translate(group, *rep))
            }
        }
    }
}

impl fmt::Display for SubsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match self {
            SubsetSpec::All => write!(f, "all"),
            SubsetSpec::List(v) => write!(f, "[{}]", join(v)),
            SubsetSpec::Random { size, seed } => write!(f, "random:{size}:{seed}"),
            SubsetSpec::SymRandom { size, seed } => write!(f, "symrandom:{size}:{seed}"),
            SubsetSpec::Coset { gens, rep } => write!(f, "coset:{}:{rep}", join(gens)),
        }
    }
}

impl FromStr for SubsetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_subset_spec(s)
    }
}
