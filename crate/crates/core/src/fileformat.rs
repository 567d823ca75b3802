//! Line-oriented text formats for every instance type, plus DIMACS CNF
//! input.
//!
//! Instance files are UTF-8 text starting with `problem <tag> version 1`.
//! Rationals are written as `p/q` (or a plain integer when the denominator
//! is one), sets as space-separated element ids. Serialization is canonical:
//! parsing a serialized instance reproduces it exactly, and equal instances
//! serialize to identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;


use crate::error::{Error, Result};
use crate::fewsizes::{GroupedKnapsack, GroupedSubsetSum, WeightGroup};
use crate::numeric::{BinPackingInstance, KnapsackInstance, MaxCutInstance, SubsetSumInstance};
use crate::oracles::CnfFormula;
use crate::polyprog::{IppInstance, Monomial, Polynomial};
use crate::ratio::{format_rat, parse_rat, parse_uint, RationalVector};
use crate::setsystems::{ElementId, SetSystemInstance, SetVariant};

/// Any instance the command-line tools operate on.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyInstance {
    Vector(RationalVector),
    Knapsack(KnapsackInstance),
    SubsetSum(SubsetSumInstance),
    HittingSet(SetSystemInstance),
    SetPacking(SetSystemInstance),
    MaxCut(MaxCutInstance),
    BinPacking(BinPackingInstance),
    GroupedKnapsack(GroupedKnapsack),
    GroupedSubsetSum(GroupedSubsetSum),
    Polynomial(Polynomial),
    Ipp(IppInstance),
}

impl AnyInstance {
    pub fn tag(&self) -> &'static str {
        match self {
            AnyInstance::Vector(_) => "vector",
            AnyInstance::Knapsack(_) => "knapsack",
            AnyInstance::SubsetSum(_) => "subset-sum",
            AnyInstance::HittingSet(_) => "hitting-set",
            AnyInstance::SetPacking(_) => "set-packing",
            AnyInstance::MaxCut(_) => "max-cut",
            AnyInstance::BinPacking(_) => "bin-packing",
            AnyInstance::GroupedKnapsack(_) => "grouped-knapsack",
            AnyInstance::GroupedSubsetSum(_) => "grouped-subset-sum",
            AnyInstance::Polynomial(_) => "polynomial",
            AnyInstance::Ipp(_) => "ipp",
        }
    }
}

fn fail(line: usize, msg: impl Into<String>) -> Error {
    Error::Validation(format!("line {line}: {}", msg.into()))
}

/// A parsed line: keyword plus remaining tokens, with its 1-based number.
struct Line<'a> {
    number: usize,
    keyword: &'a str,
    rest: Vec<&'a str>,
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(idx, raw)| {
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                return None;
            }
            let mut tokens = trimmed.split_whitespace();
            let keyword = tokens.next()?;
            Some(Line {
                number: idx + 1,
                keyword,
                rest: tokens.collect(),
            })
        })
        .collect()
}

/// Parse any instance file by its header tag.
pub fn parse_instance(text: &str) -> Result<AnyInstance> {
    let lines = content_lines(text);
    let Some(header) = lines.first() else {
        return Err(Error::validation("empty file"));
    };
    if header.keyword != "problem" || header.rest.len() != 3 || header.rest[1] != "version" {
        return Err(fail(
            header.number,
            "expected header `problem <tag> version 1`",
        ));
    }
    if header.rest[2] != "1" {
        return Err(fail(header.number, format!("unsupported version {}", header.rest[2])));
    }
    let tag = header.rest[0];
    let body = &lines[1..];
    match tag {
        "vector" => parse_vector(body).map(AnyInstance::Vector),
        "knapsack" => parse_knapsack(body).map(AnyInstance::Knapsack),
        "subset-sum" => parse_subset_sum(body).map(AnyInstance::SubsetSum),
        "hitting-set" => parse_set_system(body, SetVariant::HittingSet).map(AnyInstance::HittingSet),
        "set-packing" => parse_set_system(body, SetVariant::SetPacking).map(AnyInstance::SetPacking),
        "max-cut" => parse_max_cut(body).map(AnyInstance::MaxCut),
        "bin-packing" => parse_bin_packing(body).map(AnyInstance::BinPacking),
        "grouped-knapsack" => parse_grouped_knapsack(body).map(AnyInstance::GroupedKnapsack),
        "grouped-subset-sum" => {
            parse_grouped_subset_sum(body).map(AnyInstance::GroupedSubsetSum)
        }
        "polynomial" => parse_polynomial(body).map(AnyInstance::Polynomial),
        "ipp" => parse_ipp(body).map(AnyInstance::Ipp),
        other => Err(fail(header.number, format!("unknown problem tag `{other}`"))),
    }
}

/// Serialize any instance to its canonical text form.
pub fn serialize_instance(inst: &AnyInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "problem {} version 1", inst.tag());
    match inst {
        AnyInstance::Vector(v) => {
            let _ = writeln!(out, "entries{}", join_rationals(&v.entries));
        }
        AnyInstance::Knapsack(k) => {
            let _ = writeln!(out, "weights{}", join_rationals(&k.weights.entries));
            let _ = writeln!(out, "profits{}", join_rationals(&k.profits.entries));
            let _ = writeln!(out, "capacity {}", format_rat(&k.capacity));
            let _ = writeln!(out, "profit-target {}", format_rat(&k.profit_target));
        }
        AnyInstance::SubsetSum(s) => {
            let _ = writeln!(out, "items{}", join_uints(&s.items));
            let _ = writeln!(out, "target {}", s.target);
        }
        AnyInstance::HittingSet(s) | AnyInstance::SetPacking(s) => {
            let _ = writeln!(out, "d {}", s.set_size);
            let _ = writeln!(out, "k {}", s.budget);
            let _ = writeln!(out, "weight-bound {}", format_rat(&s.weight_bound));
            match s.variant {
                SetVariant::HittingSet => {
                    for (e, w) in s.universe.iter().zip(&s.element_weights) {
                        let _ = writeln!(out, "element {e} : {}", format_rat(w));
                    }
                    for set in &s.family {
                        let _ = writeln!(out, "set{}", join_ids(set));
                    }
                }
                SetVariant::SetPacking => {
                    for e in &s.universe {
                        let _ = writeln!(out, "element {e}");
                    }
                    for (set, w) in s.family.iter().zip(&s.set_weights) {
                        let _ = writeln!(out, "set{} : {}", join_ids(set), format_rat(w));
                    }
                }
            }
        }
        AnyInstance::MaxCut(m) => {
            let _ = writeln!(out, "vertices {}", m.num_vertices);
            let _ = writeln!(out, "cut-target {}", format_rat(&m.cut_target));
            for (u, v, w) in &m.edges {
                let _ = writeln!(out, "edge {u} {v} {}", format_rat(w));
            }
        }
        AnyInstance::BinPacking(b) => {
            let _ = writeln!(out, "bins {}", b.bins);
            let _ = writeln!(out, "bin-size {}", b.bin_size);
            let _ = writeln!(out, "items{}", join_uints(&b.items));
        }
        AnyInstance::GroupedKnapsack(g) => {
            let _ = writeln!(out, "capacity {}", format_rat(&g.capacity));
            let _ = writeln!(out, "profit-target {}", format_rat(&g.profit_target));
            for group in &g.groups {
                let values = group
                    .values
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                let _ = writeln!(out, "group {} : {values}", format_rat(&group.weight));
            }
        }
        AnyInstance::GroupedSubsetSum(g) => {
            let _ = writeln!(out, "target {}", g.target);
            for (s, m) in g.sizes.iter().zip(&g.multiplicities) {
                let _ = writeln!(out, "size {s} mult {m}");
            }
        }
        AnyInstance::Polynomial(p) => {
            let _ = writeln!(out, "vars {}", p.num_vars);
            let _ = writeln!(out, "degree {}", p.degree_bound);
            for m in &p.monomials {
                let _ = writeln!(out, "monomial{}", format_monomial(m));
            }
        }
        AnyInstance::Ipp(i) => {
            let _ = writeln!(out, "vars {}", i.objective.num_vars);
            let _ = writeln!(out, "degree {}", i.objective.degree_bound);
            let _ = writeln!(out, "box-radius {}", i.box_radius);
            let _ = writeln!(out, "threshold {}", format_rat(&i.threshold));
            let _ = writeln!(out, "objective");
            for m in &i.objective.monomials {
                let _ = writeln!(out, "monomial{}", format_monomial(m));
            }
            for (g, b) in &i.constraints {
                let _ = writeln!(out, "constraint {}", format_rat(b));
                for m in &g.monomials {
                    let _ = writeln!(out, "monomial{}", format_monomial(m));
                }
            }
        }
    }
    out
}

fn join_rationals(values: &[BigRational]) -> String {
    values.iter().fold(String::new(), |mut acc, v| {
        let _ = write!(acc, " {}", format_rat(v));
        acc
    })
}

fn join_uints(values: &[BigUint]) -> String {
    values.iter().fold(String::new(), |mut acc, v| {
        let _ = write!(acc, " {v}");
        acc
    })
}

fn join_ids(set: &BTreeSet<ElementId>) -> String {
    set.iter().fold(String::new(), |mut acc, v| {
        let _ = write!(acc, " {v}");
        acc
    })
}

fn format_monomial(m: &Monomial) -> String {
    let mut acc = String::new();
    for e in &m.exponents {
        let _ = write!(acc, " {e}");
    }
    let _ = write!(acc, " : {}", format_rat(&m.coefficient));
    acc
}

fn parse_usize(line: &Line<'_>, token: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| fail(line.number, format!("expected a count, got `{token}`")))
}

fn parse_u64(line: &Line<'_>, token: &str) -> Result<u64> {
    token
        .parse()
        .map_err(|_| fail(line.number, format!("expected an integer, got `{token}`")))
}

fn expect_one<'a>(line: &Line<'a>) -> Result<&'a str> {
    if line.rest.len() != 1 {
        return Err(fail(
            line.number,
            format!("`{}` takes exactly one argument", line.keyword),
        ));
    }
    Ok(line.rest[0])
}

fn rational_list(line: &Line<'_>) -> Result<Vec<BigRational>> {
    line.rest
        .iter()
        .map(|t| parse_rat(t).map_err(|e| fail(line.number, e.to_string())))
        .collect()
}

fn uint_list(line: &Line<'_>) -> Result<Vec<BigUint>> {
    line.rest
        .iter()
        .map(|t| parse_uint(t).map_err(|e| fail(line.number, e.to_string())))
        .collect()
}

fn parse_vector(body: &[Line<'_>]) -> Result<RationalVector> {
    let mut entries = None;
    for line in body {
        match line.keyword {
            "entries" => entries = Some(rational_list(line)?),
            other => return Err(fail(line.number, format!("unexpected keyword `{other}`"))),
        }
    }
    Ok(RationalVector::new(entries.ok_or_else(|| {
        Error::validation("missing `entries` line")
    })?))
}

fn parse_knapsack(body: &[Line<'_>]) -> Result<KnapsackInstance> {
    let mut weights = None;
    let mut profits = None;
    let mut capacity = None;
    let mut target = None;
    for line in body {
        match line.keyword {
            "weights" => weights = Some(rational_list(line)?),
            "profits" => profits = Some(rational_list(line)?),
            "capacity" => capacity = Some(parse_line_rat(line)?),
            "profit-target" => target = Some(parse_line_rat(line)?),
            other => return Err(fail(line.number, format!("unexpected keyword `{other}`"))),
        }
    }
    let inst = KnapsackInstance {
        weights: RationalVector::new(required(weights, "weights")?),
        profits: RationalVector::new(required(profits, "profits")?),
        capacity: required(capacity, "capacity")?,
        profit_target: required(target, "profit-target")?,
    };
    inst.validate()?;
    Ok(inst)
}

fn parse_subset_sum(body: &[Line<'_>]) -> Result<SubsetSumInstance> {
    let mut items = None;
    let mut target = None;
    for line in body {
        match line.keyword {
            "items" => items = Some(uint_list(line)?),
            "target" => {
                target = Some(
                    parse_uint(expect_one(line)?).map_err(|e| fail(line.number, e.to_string()))?,
                )
            }
            other => return Err(fail(line.number, format!("unexpected keyword `{other}`"))),
        }
    }
    Ok(SubsetSumInstance {
        items: required(items, "items")?,
        target: required(target, "target")?,
    })
}

fn parse_set_system(body: &[Line<'_>], variant: SetVariant) -> Result<SetSystemInstance> {
    let mut set_size = None;
    let mut budget = None;
    let mut weight_bound = None;
    let mut universe = Vec::new();
    let mut element_weights = Vec::new();
    let mut family = Vec::new();
    let mut set_weights = Vec::new();
    for line in body {
        match line.keyword {
            "d" => set_size = Some(parse_usize(line, expect_one(line)?)?),
            "k" => budget = Some(parse_u64(line, expect_one(line)?)?),
            "weight-bound" => weight_bound = Some(parse_line_rat(line)?),
            "element" => match variant {
                SetVariant::HittingSet => {
                    let (ids, weight) = split_on_colon(line)?;
                    if ids.len() != 1 {
                        return Err(fail(line.number, "expected `element <id> : <weight>`"));
                    }
                    universe.push(parse_u64(line, ids[0])?);
                    element_weights.push(
                        parse_rat(weight.ok_or_else(|| fail(line.number, "missing weight"))?)
                            .map_err(|e| fail(line.number, e.to_string()))?,
                    );
                }
                SetVariant::SetPacking => {
                    universe.push(parse_u64(line, expect_one(line)?)?);
                }
            },
            "set" => match variant {
                SetVariant::HittingSet => {
                    let members: Result<BTreeSet<ElementId>> = line
                        .rest
                        .iter()
                        .map(|t| parse_u64(line, t))
                        .collect();
                    family.push(members?);
                }
                SetVariant::SetPacking => {
                    let (ids, weight) = split_on_colon(line)?;
                    let members: Result<BTreeSet<ElementId>> =
                        ids.iter().map(|t| parse_u64(line, t)).collect();
                    family.push(members?);
                    set_weights.push(
                        parse_rat(weight.ok_or_else(|| fail(line.number, "missing set weight"))?)
                            .map_err(|e| fail(line.number, e.to_string()))?,
                    );
                }
            },
            other => return Err(fail(line.number, format!("unexpected keyword `{other}`"))),
        }
    }
    let inst = SetSystemInstance {
        variant,
        set_size: required(set_size, "d")?,
        budget: required(budget, "k")?,
        weight_bound: required(weight_bound, "weight-bound")?,
        universe,
        element_weights,
        family,
        set_weights,
    };
    inst.validate()?;
    Ok(inst)
}

/// Split a line's tokens at a literal `:`.
fn split_on_colon<'a>(line: &Line<'a>) -> Result<(Vec<&'a str>, Option<&'a str>)> {
    match line.rest.iter().position(|&t| t == ":") {
        None => Ok((line.rest.clone(), None)),
        Some(pos) => {
            if pos + 2 != line.rest.len() {
                return Err(fail(line.number, "expected exactly one value after `:`"));
            }
            Ok((line.rest[..pos].to_vec(), Some(line.rest[pos + 1])))
        }
    }
}

fn parse_max_cut(body: &[Line<'_>]) -> Result<MaxCutInstance> {
    let mut vertices = None;
    let mut target = None;
    let mut edges = Vec::new();
    for line in body {
        match line.keyword {
            "vertices" => vertices = Some(parse_usize(line, expect_one(line)?)?),
            "cut-target" => target = Some(parse_line_rat(line)?),
            "edge" => {
                if line.rest.len() != 3 {
                    return Err(fail(line.number, "expected `edge <u> <v> <weight>`"));
                }
                edges.push((
                    parse_usize(line, line.rest[0])?,
                    parse_usize(line, line.rest[1])?,
                    parse_rat(line.rest[2]).map_err(|e| fail(line.number, e.to_string()))?,
                ));
            }
            other => return Err(fail(line.number, format!("unexpected keyword `{other}`"))),
        }
    }
    let inst = MaxCutInstance {
        num_vertices: required(vertices, "vertices")?,
        edges,
        cut_target: required(target, "cut-target")?,
    };
    inst.validate()?;
    Ok(inst)
}

fn parse_bin_packing(body: &[Line<'_>]) -> Result<BinPackingInstance> {
    let mut bins = None;
    let mut bin_size = None;
    let mut items = None;
    for line in body {
        match line.keyword {
            "bins" => bins = Some(parse_u64(line, expect_one(line)?)?),
            "bin-size" => {
                bin_size = Some(
                    parse_uint(expect_one(line)?).map_err(|e| fail(line.number, e.to_string()))?,
                )
            }
            "items" => items = Some(uint_list(line)?),
            other => return Err(fail(line.number, format!("unexpected keyword `{other}`"))),
        }
    }
    let inst = BinPackingInstance {
        items: required(items, "items")?,
        bin_size: required(bin_size, "bin-size")?,
        bins: required(bins, "bins")?,
    };
    inst.validate()?;
    Ok(inst)
}

fn parse_grouped_knapsack(body: &[Line<'_>]) -> Result<GroupedKnapsack> {
    let mut capacity = None;
    let mut target = None;
    let mut groups = Vec::new();
    for line in body {
        match line.keyword {
            "capacity" => capacity = Some(parse_line_rat(line)?),
            "profit-target" => target = Some(parse_line_rat(line)?),
            "group" => {
                let head = &line.rest;
                let Some(pos) = head.iter().position(|&t| t == ":") else {
                    return Err(fail(line.number, "expected `group <weight> : <values...>`"));
                };
                if pos != 1 {
                    return Err(fail(line.number, "expected one weight before `:`"));
                }
                let weight =
                    parse_rat(head[0]).map_err(|e| fail(line.number, e.to_string()))?;
                let values: Result<Vec<BigInt>> = head[pos + 1..]
                    .iter()
                    .map(|t| {
                        t.parse()
                            .map_err(|_| fail(line.number, format!("expected integer, got `{t}`")))
                    })
                    .collect();
                groups.push(WeightGroup {
                    weight,
                    values: values?,
                });
            }
            other => return Err(fail(line.number, format!("unexpected keyword `{other}`"))),
        }
    }
    let inst = GroupedKnapsack {
        groups,
        capacity: required(capacity, "capacity")?,
        profit_target: required(target, "profit-target")?,
    };
    inst.validate()?;
    Ok(inst)
}

fn parse_grouped_subset_sum(body: &[Line<'_>]) -> Result<GroupedSubsetSum> {
    let mut target = None;
    let mut sizes = Vec::new();
    let mut multiplicities = Vec::new();
    for line in body {
        match line.keyword {
            "target" => {
                target = Some(
                    parse_uint(expect_one(line)?).map_err(|e| fail(line.number, e.to_string()))?,
                )
            }
            "size" => {
                if line.rest.len() != 3 || line.rest[1] != "mult" {
                    return Err(fail(line.number, "expected `size <s> mult <m>`"));
                }
                sizes.push(
                    parse_uint(line.rest[0]).map_err(|e| fail(line.number, e.to_string()))?,
                );
                multiplicities.push(parse_u64(line, line.rest[2])?);
            }
            other => return Err(fail(line.number, format!("unexpected keyword `{other}`"))),
        }
    }
    let inst = GroupedSubsetSum {
        sizes,
        multiplicities,
        target: required(target, "target")?,
    };
    inst.validate()?;
    Ok(inst)
}

fn parse_monomial_line(line: &Line<'_>, num_vars: usize) -> Result<Monomial> {
    let (exps, coeff) = split_on_colon(line)?;
    if exps.len() != num_vars {
        return Err(fail(
            line.number,
            format!("expected {num_vars} exponents, got {}", exps.len()),
        ));
    }
    let exponents: Result<Vec<u32>> = exps
        .iter()
        .map(|t| {
            t.parse()
                .map_err(|_| fail(line.number, format!("expected exponent, got `{t}`")))
        })
        .collect();
    let coefficient = parse_rat(coeff.ok_or_else(|| fail(line.number, "missing coefficient"))?)
        .map_err(|e| fail(line.number, e.to_string()))?;
    Ok(Monomial {
        exponents: exponents?,
        coefficient,
    })
}

fn parse_polynomial(body: &[Line<'_>]) -> Result<Polynomial> {
    let mut vars = None;
    let mut degree = None;
    let mut monomials = Vec::new();
    for line in body {
        match line.keyword {
            "vars" => vars = Some(parse_usize(line, expect_one(line)?)?),
            "degree" => degree = Some(parse_u64(line, expect_one(line)?)? as u32),
            "monomial" => {
                let n = required(vars, "vars (before monomials)")?;
                vars = Some(n);
                monomials.push(parse_monomial_line(line, n)?);
            }
            other => return Err(fail(line.number, format!("unexpected keyword `{other}`"))),
        }
    }
    Polynomial::new(
        required(vars, "vars")?,
        required(degree, "degree")?,
        monomials,
    )
}

fn parse_ipp(body: &[Line<'_>]) -> Result<IppInstance> {
    let mut vars = None;
    let mut degree = None;
    let mut box_radius = None;
    let mut threshold = None;
    enum Section {
        None,
        Objective,
        Constraint(usize),
    }
    let mut section = Section::None;
    let mut objective_monomials = Vec::new();
    let mut constraints: Vec<(Vec<Monomial>, BigRational)> = Vec::new();
    for line in body {
        match line.keyword {
            "vars" => vars = Some(parse_usize(line, expect_one(line)?)?),
            "degree" => degree = Some(parse_u64(line, expect_one(line)?)? as u32),
            "box-radius" => {
                box_radius = Some(
                    parse_uint(expect_one(line)?).map_err(|e| fail(line.number, e.to_string()))?,
                )
            }
            "threshold" => threshold = Some(parse_line_rat(line)?),
            "objective" => {
                if !line.rest.is_empty() {
                    return Err(fail(line.number, "`objective` takes no arguments"));
                }
                section = Section::Objective;
            }
            "constraint" => {
                let bound = parse_rat(expect_one(line)?)
                    .map_err(|e| fail(line.number, e.to_string()))?;
                constraints.push((Vec::new(), bound));
                section = Section::Constraint(constraints.len() - 1);
            }
            "monomial" => {
                let n = required(vars, "vars (before monomials)")?;
                vars = Some(n);
                let m = parse_monomial_line(line, n)?;
                match section {
                    Section::None => {
                        return Err(fail(line.number, "monomial outside a section"))
                    }
                    Section::Objective => objective_monomials.push(m),
                    Section::Constraint(i) => constraints[i].0.push(m),
                }
            }
            other => return Err(fail(line.number, format!("unexpected keyword `{other}`"))),
        }
    }
    let n = required(vars, "vars")?;
    let d = required(degree, "degree")?;
    let inst = IppInstance {
        objective: Polynomial::new(n, d, objective_monomials)?,
        threshold: required(threshold, "threshold")?,
        constraints: constraints
            .into_iter()
            .map(|(ms, b)| Polynomial::new(n, d, ms).map(|p| (p, b)))
            .collect::<Result<_>>()?,
        box_radius: required(box_radius, "box-radius")?,
    };
    inst.validate()?;
    Ok(inst)
}

fn parse_line_rat(line: &Line<'_>) -> Result<BigRational> {
    parse_rat(expect_one(line)?).map_err(|e| fail(line.number, e.to_string()))
}

fn required<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| Error::validation(format!("missing `{what}` line")))
}

/// Parse a DIMACS CNF file into a 3-CNF formula (every clause must have
/// exactly three literals; repeats allowed).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut num_vars: Option<usize> = None;
    let mut declared_clauses: Option<usize> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<i64> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            if tokens.len() != 3 || tokens[0] != "cnf" {
                return Err(fail(idx + 1, "expected `p cnf <vars> <clauses>`"));
            }
            num_vars = Some(
                tokens[1]
                    .parse()
                    .map_err(|_| fail(idx + 1, "bad variable count"))?,
            );
            declared_clauses = Some(
                tokens[2]
                    .parse()
                    .map_err(|_| fail(idx + 1, "bad clause count"))?,
            );
            continue;
        }
        for token in line.split_whitespace() {
            let lit: i64 = token
                .parse()
                .map_err(|_| fail(idx + 1, format!("expected literal, got `{token}`")))?;
            if lit == 0 {
                if pending.len() != 3 {
                    return Err(fail(
                        idx + 1,
                        format!("clause has {} literals, expected exactly 3", pending.len()),
                    ));
                }
                clauses.push([pending[0], pending[1], pending[2]]);
                pending.clear();
            } else {
                pending.push(lit);
            }
        }
    }
    if !pending.is_empty() {
        return Err(Error::validation("unterminated clause at end of file"));
    }
    let n = num_vars.ok_or_else(|| Error::validation("missing `p cnf` header"))?;
    if let Some(m) = declared_clauses {
        if m != clauses.len() {
            return Err(Error::validation(format!(
                "header declares {m} clauses, found {}",
                clauses.len()
            )));
        }
    }
    CnfFormula::new(n, clauses)
}

/// Serialize a CNF formula in DIMACS form.
pub fn serialize_dimacs(phi: &CnfFormula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", phi.num_vars, phi.clauses.len());
    for clause in &phi.clauses {
        let _ = writeln!(out, "{} {} {} 0", clause[0], clause[1], clause[2]);
    }
    out
}

/// Total encoding size in bits of any instance, for reports.
pub fn instance_bits(inst: &AnyInstance) -> u64 {
    use crate::ratio::rat_bits;
    match inst {
        AnyInstance::Vector(v) => v.entries.iter().map(rat_bits).sum(),
        AnyInstance::Knapsack(k) => k.encoding_bits(),
        AnyInstance::SubsetSum(s) => s.encoding_bits(),
        AnyInstance::HittingSet(s) | AnyInstance::SetPacking(s) => s.encoding_bits(),
        AnyInstance::MaxCut(m) => m.encoding_bits(),
        AnyInstance::BinPacking(b) => b.encoding_bits(),
        AnyInstance::GroupedKnapsack(g) => g.encoding_bits(),
        AnyInstance::GroupedSubsetSum(g) => g.encoding_bits(),
        AnyInstance::Polynomial(p) => p.encoding_bits(),
        AnyInstance::Ipp(i) => i.encoding_bits(),
    }
}

/// Structural statistics per instance kind, for the stats command.
pub fn instance_stats(inst: &AnyInstance) -> Vec<(String, String)> {
    let mut stats = vec![
        ("problem".to_string(), inst.tag().to_string()),
        ("size_bits".to_string(), instance_bits(inst).to_string()),
    ];
    let mut push = |k: &str, v: String| stats.push((k.to_string(), v));
    match inst {
        AnyInstance::Vector(v) => push("entries", v.len().to_string()),
        AnyInstance::Knapsack(k) => push("items", k.item_count().to_string()),
        AnyInstance::SubsetSum(s) => push("items", s.items.len().to_string()),
        AnyInstance::HittingSet(s) | AnyInstance::SetPacking(s) => {
            push("d", s.set_size.to_string());
            push("k", s.budget.to_string());
            push("universe", s.universe.len().to_string());
            push("sets", s.family.len().to_string());
        }
        AnyInstance::MaxCut(m) => {
            push("vertices", m.num_vertices.to_string());
            push("edges", m.edges.len().to_string());
        }
        AnyInstance::BinPacking(b) => {
            push("items", b.items.len().to_string());
            push("bins", b.bins.to_string());
        }
        AnyInstance::GroupedKnapsack(g) => {
            push("groups", g.groups.len().to_string());
            push("items", g.item_count().to_string());
        }
        AnyInstance::GroupedSubsetSum(g) => {
            push("sizes", g.sizes.len().to_string());
            push("items", g.total_items().to_string());
        }
        AnyInstance::Polynomial(p) => {
            push("vars", p.num_vars.to_string());
            push("terms", p.term_count().to_string());
        }
        AnyInstance::Ipp(i) => {
            push("vars", i.objective.num_vars.to_string());
            push("constraints", i.constraints.len().to_string());
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn roundtrip(text: &str) -> AnyInstance {
        let inst = parse_instance(text).unwrap();
        let serialized = serialize_instance(&inst);
        let reparsed = parse_instance(&serialized).unwrap();
        assert_eq!(inst, reparsed, "round trip changed the instance");
        assert_eq!(
            serialized,
            serialize_instance(&reparsed),
            "serialization is not canonical"
        );
        inst
    }

    #[test]
    fn vector_roundtrip() {
        let inst = roundtrip("problem vector version 1\nentries 1/2 -3 7/9\n");
        let AnyInstance::Vector(v) = inst else { panic!() };
        assert_eq!(v.len(), 3);
        // empty vectors work too
        roundtrip("problem vector version 1\nentries\n");
    }

    #[test]
    fn knapsack_roundtrip() {
        roundtrip(
            "problem knapsack version 1\nweights 1/2 1/3 1/6\nprofits 1 2 3\ncapacity 1/2\nprofit-target 3\n",
        );
    }

    #[test]
    fn subset_sum_roundtrip() {
        let inst = roundtrip("problem subset-sum version 1\nitems 3 5 7\ntarget 8\n");
        let AnyInstance::SubsetSum(s) = inst else { panic!() };
        assert_eq!(s.items.len(), 3);
    }

    #[test]
    fn set_system_roundtrips() {
        roundtrip(
            "problem hitting-set version 1\nd 2\nk 2\nweight-bound 5/2\nelement 1 : 1\nelement 2 : 1/2\nelement 3 : 3\nset 1 2\nset 2 3\n",
        );
        roundtrip(
            "problem set-packing version 1\nd 2\nk 1\nweight-bound 4\nelement 1\nelement 2\nelement 3\nset 1 2 : 5\nset 2 3 : 3/2\n",
        );
    }

    #[test]
    fn max_cut_roundtrip() {
        roundtrip(
            "problem max-cut version 1\nvertices 3\ncut-target 3/2\nedge 0 1 1\nedge 1 2 5/2\n",
        );
    }

    #[test]
    fn bin_packing_roundtrip() {
        roundtrip("problem bin-packing version 1\nbins 2\nbin-size 10\nitems 3 5 7\n");
    }

    #[test]
    fn grouped_roundtrips() {
        roundtrip(
            "problem grouped-knapsack version 1\ncapacity 7/2\nprofit-target 8\ngroup 1/2 : 5 3 2\ngroup 2 : 9\n",
        );
        roundtrip("problem grouped-subset-sum version 1\ntarget 9\nsize 3 mult 4\n");
    }

    #[test]
    fn polynomial_and_ipp_roundtrip() {
        roundtrip(
            "problem polynomial version 1\nvars 2\ndegree 2\nmonomial 2 0 : 1/2\nmonomial 0 1 : -1/3\n",
        );
        roundtrip(
            "problem ipp version 1\nvars 1\ndegree 1\nbox-radius 3\nthreshold 0\nobjective\nmonomial 1 : 1/7\nconstraint 0\nmonomial 1 : 1\n",
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_instance("problem knapsack version 1\nweights 1 2\nprofits 1\ncapacity x\nprofit-target 0\n")
            .unwrap_err();
        assert!(matches!(&err, Error::Validation(m) if m.contains("line 4")), "{err}");
        let err = parse_instance("problem nonsense version 1\n").unwrap_err();
        assert!(matches!(&err, Error::Validation(m) if m.contains("unknown problem tag")));
        let err = parse_instance("").unwrap_err();
        assert!(matches!(&err, Error::Validation(m) if m.contains("empty")));
    }

    #[test]
    fn dimacs_parse_and_serialize() {
        let text = "c comment\np cnf 2 2\n1 -2 1 0\n2 2 2 0\n";
        let phi = parse_dimacs(text).unwrap();
        assert_eq!(phi.num_vars, 2);
        assert_eq!(phi.clauses, vec![[1, -2, 1], [2, 2, 2]]);
        let back = parse_dimacs(&serialize_dimacs(&phi)).unwrap();
        assert_eq!(phi, back);

        assert!(parse_dimacs("p cnf 1 1\n1 1 0\n").is_err()); // two literals
        assert!(parse_dimacs("1 1 1 0\n").is_err()); // missing header
    }

    #[test]
    fn stats_include_size_and_counts() {
        let inst = parse_instance("problem subset-sum version 1\nitems 3 5\ntarget 8\n").unwrap();
        let stats = instance_stats(&inst);
        assert_eq!(stats[0].1, "subset-sum");
        assert!(stats.iter().any(|(k, _)| k == "size_bits"));
        assert!(stats.iter().any(|(k, v)| k == "items" && v == "2"));
        let _ = BigUint::one();
    }
}
