//! The definition language: a small text format for algebras, modules,
//! cochains, forms, and module maps, with a lexer, recursive-descent parser,
//! semantic builder, and canonical renderer.
//!
//! Grammar sketch:
//!
//! ```text
//! file       := item*
//! item       := paramDecl | moduleDecl
//! paramDecl  := "param" ident ("," ident)* ";"
//! moduleDecl := ("algebra" | "module") ident "{" (paramDecl | basisDecl | block)* "}"
//! basisDecl  := "basis" ident+ ";"
//! block      := ("product" | "bracket" | "laction" | "raction"
//!                | "cochain" INT | "form" | "map") eq*
//! eq         := ident+ "=" sum ";"
//! sum        := ["-"] term (("+" | "-") term)*
//! term       := primary (["*"] primary)*
//! primary    := factor ("^" INT)?
//! factor     := INT ("/" INT)? | ident | "(" sum ")"
//! ```
//!
//! `#` starts a comment running to end of line. Each block kind admits a
//! fixed set of indeterminates: `D` and `L` in products, brackets, and
//! actions; `D` and `L1..L(n-1)` in an `n`-cochain; `L` alone in forms; `D`
//! alone in maps. Parameters are admitted everywhere. `L` is an alias for
//! `L1` and `M` for `L2`.

use std::collections::HashMap;
use std::sync::Arc;

use num::BigInt;

use crate::algebra::{LieConformalAlgebra, LscAlgebra};
use crate::cohomology::{tuples, Cochain, Flavor};
use crate::conformal::{Element, FreeModule, LambdaMap, ModuleMap};
use crate::poly::{Poly, Rat, Ring, VarId, N_LAMBDA};
use crate::rep::RepPair;
use crate::tstar::ConformalBilinearForm;
use crate::Error;

fn err(kind: &'static str, line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Lang {
        kind,
        line,
        col,
        msg: msg.into(),
    }
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq)]
enum TokKind {
    Ident,
    Int,
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    text: String,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Tok>, Error> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let (l0, c0) = (line, col);
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            toks.push(Tok {
                kind: TokKind::Ident,
                text: s,
                line: l0,
                col: c0,
            });
        } else if c.is_ascii_digit() {
            let (l0, c0) = (line, col);
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            toks.push(Tok {
                kind: TokKind::Int,
                text: s,
                line: l0,
                col: c0,
            });
        } else if "{}()=;,+-*^/".contains(c) {
            toks.push(Tok {
                kind: TokKind::Sym(c),
                text: c.to_string(),
                line,
                col,
            });
            chars.next();
            col += 1;
        } else {
            return Err(err("lexical", line, col, format!("unexpected character {c:?}")));
        }
    }
    toks.push(Tok {
        kind: TokKind::Eof,
        text: String::new(),
        line,
        col,
    });
    Ok(toks)
}

// ------------------------------------------------------------------ AST

#[derive(Clone, Debug)]
enum Expr {
    Num(Rat),
    Sym { name: String, line: usize, col: usize },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32, usize, usize),
    Neg(Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Product,
    Bracket,
    Laction,
    Raction,
    Cochain(usize),
    Form,
    Map,
}

impl BlockKind {
    fn keyword(self) -> &'static str {
        match self {
            BlockKind::Product => "product",
            BlockKind::Bracket => "bracket",
            BlockKind::Laction => "laction",
            BlockKind::Raction => "raction",
            BlockKind::Cochain(_) => "cochain",
            BlockKind::Form => "form",
            BlockKind::Map => "map",
        }
    }

    fn arity(self) -> usize {
        match self {
            BlockKind::Map => 1,
            BlockKind::Cochain(n) => n,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug)]
struct AstEq {
    lhs: Vec<Tok>,
    rhs: Expr,
}

#[derive(Clone, Debug)]
struct AstBlock {
    kind: BlockKind,
    line: usize,
    col: usize,
    eqs: Vec<AstEq>,
}

#[derive(Clone, Debug)]
struct AstModule {
    is_algebra: bool,
    name: Tok,
    basis: Vec<Tok>,
    blocks: Vec<AstBlock>,
}

#[derive(Clone, Debug)]
struct Ast {
    params: Vec<Tok>,
    modules: Vec<AstModule>,
}

const KEYWORDS: &[&str] = &[
    "param", "basis", "algebra", "module", "product", "bracket", "laction", "raction", "cochain",
    "form", "map",
];

const BLOCK_KEYWORDS: &[&str] = &[
    "product", "bracket", "laction", "raction", "cochain", "form", "map",
];

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, msg: impl Into<String>) -> Error {
        let t = self.peek();
        err("syntax", t.line, t.col, msg)
    }

    fn expect_sym(&mut self, c: char) -> Result<Tok, Error> {
        if self.peek().kind == TokKind::Sym(c) {
            Ok(self.next())
        } else {
            Err(self.syntax(format!("expected {:?}, found {:?}", c, self.peek().text)))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<Tok, Error> {
        if self.peek().kind == TokKind::Ident && !KEYWORDS.contains(&self.peek().text.as_str()) {
            Ok(self.next())
        } else {
            Err(self.syntax(format!("expected {what}, found {:?}", self.peek().text)))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        self.peek().kind == TokKind::Ident && self.peek().text == kw
    }

    fn file(&mut self) -> Result<Ast, Error> {
        let mut ast = Ast {
            params: Vec::new(),
            modules: Vec::new(),
        };
        loop {
            if self.peek().kind == TokKind::Eof {
                return Ok(ast);
            }
            if self.at_keyword("param") {
                self.param_decl(&mut ast.params)?;
            } else if self.at_keyword("algebra") || self.at_keyword("module") {
                let m = self.module_decl(&mut ast.params)?;
                ast.modules.push(m);
            } else {
                return Err(self.syntax(format!(
                    "expected \"param\", \"algebra\", or \"module\", found {:?}",
                    self.peek().text
                )));
            }
        }
    }

    fn param_decl(&mut self, out: &mut Vec<Tok>) -> Result<(), Error> {
        self.next(); // param
        out.push(self.expect_ident("parameter name")?);
        while self.peek().kind == TokKind::Sym(',') {
            self.next();
            out.push(self.expect_ident("parameter name")?);
        }
        self.expect_sym(';')?;
        Ok(())
    }

    fn module_decl(&mut self, params: &mut Vec<Tok>) -> Result<AstModule, Error> {
        let kw = self.next();
        let name = self.expect_ident("module name")?;
        self.expect_sym('{')?;
        let mut m = AstModule {
            is_algebra: kw.text == "algebra",
            name,
            basis: Vec::new(),
            blocks: Vec::new(),
        };
        loop {
            if self.peek().kind == TokKind::Sym('}') {
                self.next();
                break;
            }
            if self.at_keyword("param") {
                self.param_decl(params)?;
            } else if self.at_keyword("basis") {
                self.next();
                m.basis.push(self.expect_ident("basis name")?);
                while self.peek().kind == TokKind::Ident
                    && !KEYWORDS.contains(&self.peek().text.as_str())
                {
                    m.basis.push(self.next());
                }
                self.expect_sym(';')?;
            } else if self.peek().kind == TokKind::Ident
                && BLOCK_KEYWORDS.contains(&self.peek().text.as_str())
            {
                m.blocks.push(self.block()?);
            } else {
                return Err(self.syntax(format!(
                    "expected a declaration or \"}}\", found {:?}",
                    self.peek().text
                )));
            }
        }
        if m.basis.is_empty() {
            return Err(err(
                "semantic",
                m.name.line,
                m.name.col,
                format!("module {:?} declares no basis", m.name.text),
            ));
        }
        Ok(m)
    }

    fn block(&mut self) -> Result<AstBlock, Error> {
        let kw = self.next();
        let kind = match kw.text.as_str() {
            "product" => BlockKind::Product,
            "bracket" => BlockKind::Bracket,
            "laction" => BlockKind::Laction,
            "raction" => BlockKind::Raction,
            "form" => BlockKind::Form,
            "map" => BlockKind::Map,
            "cochain" => {
                if self.peek().kind != TokKind::Int {
                    return Err(self.syntax("expected cochain degree"));
                }
                let t = self.next();
                let n: usize = t
                    .text
                    .parse()
                    .map_err(|_| err("syntax", t.line, t.col, "invalid cochain degree"))?;
                if n < 1 || n > N_LAMBDA {
                    return Err(err(
                        "semantic",
                        t.line,
                        t.col,
                        format!("cochain degree must be between 1 and {N_LAMBDA}"),
                    ));
                }
                BlockKind::Cochain(n)
            }
            _ => unreachable!(),
        };
        let mut eqs = Vec::new();
        while self.peek().kind == TokKind::Ident && !KEYWORDS.contains(&self.peek().text.as_str()) {
            let mut lhs = vec![self.next()];
            while self.peek().kind == TokKind::Ident
                && !KEYWORDS.contains(&self.peek().text.as_str())
            {
                lhs.push(self.next());
            }
            self.expect_sym('=')?;
            let rhs = self.sum()?;
            self.expect_sym(';')?;
            eqs.push(AstEq { lhs, rhs });
        }
        Ok(AstBlock {
            kind,
            line: kw.line,
            col: kw.col,
            eqs,
        })
    }

    fn sum(&mut self) -> Result<Expr, Error> {
        let mut acc = if self.peek().kind == TokKind::Sym('-') {
            self.next();
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek().kind {
                TokKind::Sym('+') => {
                    self.next();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                TokKind::Sym('-') => {
                    self.next();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Error> {
        let mut acc = self.primary()?;
        loop {
            match self.peek().kind {
                TokKind::Sym('*') => {
                    self.next();
                    acc = Expr::Mul(Box::new(acc), Box::new(self.primary()?));
                }
                // juxtaposition: `(D + L) a`, `2 a`
                TokKind::Sym('(') | TokKind::Int => {
                    acc = Expr::Mul(Box::new(acc), Box::new(self.primary()?));
                }
                TokKind::Ident if !KEYWORDS.contains(&self.peek().text.as_str()) => {
                    acc = Expr::Mul(Box::new(acc), Box::new(self.primary()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, Error> {
        let base = self.factor()?;
        if self.peek().kind == TokKind::Sym('^') {
            self.next();
            if self.peek().kind != TokKind::Int {
                return Err(self.syntax("expected an integer exponent"));
            }
            let t = self.next();
            let e: u32 = t
                .text
                .parse()
                .map_err(|_| err("syntax", t.line, t.col, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), e, t.line, t.col));
        }
        Ok(base)
    }

    fn factor(&mut self) -> Result<Expr, Error> {
        match self.peek().kind.clone() {
            TokKind::Int => {
                let t = self.next();
                let numer: BigInt = t.text.parse().unwrap();
                if self.peek().kind == TokKind::Sym('/') {
                    self.next();
                    if self.peek().kind != TokKind::Int {
                        return Err(self.syntax("expected a denominator"));
                    }
                    let d = self.next();
                    let denom: BigInt = d.text.parse().unwrap();
                    if denom == BigInt::from(0) {
                        return Err(err("semantic", d.line, d.col, "zero denominator"));
                    }
                    Ok(Expr::Num(Rat::new(numer, denom)))
                } else {
                    Ok(Expr::Num(Rat::from(numer)))
                }
            }
            TokKind::Ident if !KEYWORDS.contains(&self.peek().text.as_str()) => {
                let t = self.next();
                Ok(Expr::Sym {
                    name: t.text,
                    line: t.line,
                    col: t.col,
                })
            }
            TokKind::Sym('(') => {
                self.next();
                let e = self.sum()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            _ => Err(self.syntax(format!(
                "expected a number, name, or \"(\", found {:?}",
                self.peek().text
            ))),
        }
    }
}

// -------------------------------------------------------- semantic build

/// One declared module with its built engine objects.
#[derive(Clone, Debug)]
pub struct ModuleDef {
    pub is_algebra: bool,
    pub name: String,
    pub module: Arc<FreeModule>,
    pub product: Option<LambdaMap>,
    pub bracket: Option<LambdaMap>,
    pub laction: Option<LambdaMap>,
    pub raction: Option<LambdaMap>,
    pub cochains: Vec<Cochain>,
    pub form: Option<ConformalBilinearForm>,
    pub maps: Vec<ModuleMap>,
}

/// A parsed definition file: a shared ring plus the declared modules with
/// their structure tables, all polynomials normalized.
#[derive(Clone, Debug)]
pub struct DefinitionFile {
    pub ring: Arc<Ring>,
    pub modules: Vec<ModuleDef>,
}

/// An evaluated right-hand side: `scalar + sum_i vector[i] e_i`.
struct Val {
    scalar: Poly,
    vector: Vec<Poly>,
}

impl Val {
    fn num(ring: &Arc<Ring>, rank: usize, c: Rat) -> Val {
        Val {
            scalar: Poly::constant(ring, c),
            vector: vec![Poly::zero(ring); rank],
        }
    }

    fn has_vector(&self) -> bool {
        self.vector.iter().any(|p| !p.is_zero())
    }
}

struct Ctx<'a> {
    ring: &'a Arc<Ring>,
    /// indeterminates admitted for the enclosing block kind
    allowed: Vec<VarId>,
    /// basis names of the value module
    basis: HashMap<String, usize>,
    block: &'static str,
}

fn eval(e: &Expr, ctx: &Ctx) -> Result<Val, Error> {
    let rank = ctx.basis.len();
    match e {
        Expr::Num(c) => Ok(Val::num(ctx.ring, rank, c.clone())),
        Expr::Sym { name, line, col } => {
            if let Some(&i) = ctx.basis.get(name) {
                let mut v = Val::num(ctx.ring, rank, Rat::from(BigInt::from(0)));
                v.vector[i] = Poly::int(ctx.ring, 1);
                return Ok(v);
            }
            let var = ctx.ring.resolve(name).ok_or_else(|| {
                err("semantic", *line, *col, format!("undeclared name {name:?}"))
            })?;
            if ctx.ring.param(name).is_none() && !ctx.allowed.contains(&var) {
                return Err(err(
                    "semantic",
                    *line,
                    *col,
                    format!("{name} is not permitted in a {} block", ctx.block),
                ));
            }
            let mut v = Val::num(ctx.ring, rank, Rat::from(BigInt::from(0)));
            v.scalar = Poly::var(ctx.ring, var);
            Ok(v)
        }
        Expr::Add(a, b) => {
            let (a, b) = (eval(a, ctx)?, eval(b, ctx)?);
            Ok(Val {
                scalar: a.scalar.add(&b.scalar),
                vector: a.vector.iter().zip(&b.vector).map(|(x, y)| x.add(y)).collect(),
            })
        }
        Expr::Sub(a, b) => {
            let (a, b) = (eval(a, ctx)?, eval(b, ctx)?);
            Ok(Val {
                scalar: a.scalar.sub(&b.scalar),
                vector: a.vector.iter().zip(&b.vector).map(|(x, y)| x.sub(y)).collect(),
            })
        }
        Expr::Neg(a) => {
            let a = eval(a, ctx)?;
            Ok(Val {
                scalar: a.scalar.neg(),
                vector: a.vector.iter().map(Poly::neg).collect(),
            })
        }
        Expr::Mul(a, b) => {
            let (a, b) = (eval(a, ctx)?, eval(b, ctx)?);
            if a.has_vector() && b.has_vector() {
                let (line, col) = expr_pos(e);
                return Err(err("semantic", line, col, "basis elements cannot be multiplied"));
            }
            let (s, v) = if a.has_vector() { (&b, &a) } else { (&a, &b) };
            Ok(Val {
                scalar: s.scalar.mul(&v.scalar),
                vector: v.vector.iter().map(|p| p.mul(&s.scalar)).collect(),
            })
        }
        Expr::Pow(a, k, line, col) => {
            let a = eval(a, ctx)?;
            if a.has_vector() {
                return Err(err("semantic", *line, *col, "basis elements cannot be raised to a power"));
            }
            Ok(Val {
                scalar: a.scalar.pow(*k),
                vector: a.vector,
            })
        }
    }
}

fn expr_pos(e: &Expr) -> (usize, usize) {
    match e {
        Expr::Num(_) => (0, 0),
        Expr::Sym { line, col, .. } => (*line, *col),
        Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) | Expr::Neg(a) => expr_pos(a),
        Expr::Pow(_, _, line, col) => (*line, *col),
    }
}

fn basis_index(m: &Arc<FreeModule>, t: &Tok) -> Result<usize, Error> {
    m.basis
        .iter()
        .position(|b| *b == t.text)
        .ok_or_else(|| {
            err(
                "semantic",
                t.line,
                t.col,
                format!("{:?} is not a basis element of module {:?}", t.text, m.name),
            )
        })
}

fn build(ast: &Ast) -> Result<DefinitionFile, Error> {
    // parameters: reserved and duplicate names get source positions
    let mut names: Vec<&str> = Vec::new();
    for p in &ast.params {
        if Ring::is_reserved(&p.text) {
            return Err(err(
                "semantic",
                p.line,
                p.col,
                format!("{:?} is a reserved name", p.text),
            ));
        }
        if names.contains(&p.text.as_str()) {
            return Err(err(
                "semantic",
                p.line,
                p.col,
                format!("parameter {:?} declared twice", p.text),
            ));
        }
        names.push(&p.text);
    }
    let ring = Ring::new(&names)?;

    // basis names: reserved, keyword, and collision checks across the file
    let mut seen: Vec<&str> = names.clone();
    for m in &ast.modules {
        for b in &m.basis {
            if Ring::is_reserved(&b.text) {
                return Err(err(
                    "semantic",
                    b.line,
                    b.col,
                    format!("{:?} is a reserved name", b.text),
                ));
            }
            if seen.contains(&b.text.as_str()) {
                return Err(err(
                    "semantic",
                    b.line,
                    b.col,
                    format!("name {:?} declared twice", b.text),
                ));
            }
            seen.push(&b.text);
        }
    }

    let mut defs: Vec<ModuleDef> = Vec::new();
    for am in &ast.modules {
        let basis_refs: Vec<&str> = am.basis.iter().map(|t| t.text.as_str()).collect();
        let module = FreeModule::new(&am.name.text, &basis_refs);
        // the first algebra declaration acts in laction/raction blocks and
        // is the cochain source
        let algebra_def = defs.iter().find(|d| d.is_algebra);
        let algebra_module = if am.is_algebra {
            Some(module.clone())
        } else {
            algebra_def.map(|d| d.module.clone())
        };

        let mut def = ModuleDef {
            is_algebra: am.is_algebra,
            name: am.name.text.clone(),
            module: module.clone(),
            product: None,
            bracket: None,
            laction: None,
            raction: None,
            cochains: Vec::new(),
            form: None,
            maps: Vec::new(),
        };

        for block in &am.blocks {
            let kind = block.kind;
            let l1 = Ring::lambda(1);
            let allowed: Vec<VarId> = match kind {
                BlockKind::Product | BlockKind::Bracket | BlockKind::Laction | BlockKind::Raction => {
                    vec![Ring::D, l1]
                }
                BlockKind::Cochain(n) => {
                    let mut v = vec![Ring::D];
                    for k in 1..n {
                        v.push(Ring::lambda(k));
                    }
                    v
                }
                BlockKind::Form => vec![l1],
                BlockKind::Map => vec![Ring::D],
            };
            // the module whose basis may appear on the left of `=`, per slot
            let needs_algebra = matches!(
                kind,
                BlockKind::Laction | BlockKind::Raction | BlockKind::Cochain(_)
            );
            let src = if needs_algebra {
                algebra_module.clone().ok_or_else(|| {
                    err(
                        "semantic",
                        block.line,
                        block.col,
                        format!("a {} block requires an algebra declaration", kind.keyword()),
                    )
                })?
            } else {
                module.clone()
            };
            let value_module = module.clone();
            let mut basis_map = HashMap::new();
            if kind != BlockKind::Form {
                for (i, b) in value_module.basis.iter().enumerate() {
                    basis_map.insert(b.clone(), i);
                }
            }
            let ctx = Ctx {
                ring: &ring,
                allowed,
                basis: basis_map,
                block: kind.keyword(),
            };

            // destination tables, filled from the equations
            let mut lam: Option<LambdaMap> = None;
            let mut coch: Option<Cochain> = None;
            let mut form: Option<Vec<Vec<Poly>>> = None;
            let mut map_images: Option<Vec<Element>> = None;
            match kind {
                BlockKind::Product | BlockKind::Bracket => {
                    lam = Some(LambdaMap::zero(&ring, &module, &module, &module));
                }
                BlockKind::Laction | BlockKind::Raction => {
                    lam = Some(LambdaMap::zero(&ring, &src, &module, &module));
                }
                BlockKind::Cochain(n) => {
                    // over a bracket-only algebra cochains live in the Lie
                    // complex, otherwise in the left-symmetric one
                    let flavor = if am.blocks.iter().any(|b| b.kind == BlockKind::Bracket)
                        && !am.blocks.iter().any(|b| b.kind == BlockKind::Product)
                    {
                        Flavor::Lie
                    } else {
                        Flavor::Lsc
                    };
                    coch = Some(Cochain::zero(&ring, &src, &module, n, flavor));
                }
                BlockKind::Form => {
                    form = Some(vec![vec![Poly::zero(&ring); module.rank()]; module.rank()]);
                }
                BlockKind::Map => {
                    map_images = Some(vec![Element::zero(&ring, &module); module.rank()]);
                }
            }
            let mut filled: Vec<Vec<usize>> = Vec::new();
            for eq in &block.eqs {
                if eq.lhs.len() != kind.arity() {
                    let t = &eq.lhs[0];
                    return Err(err(
                        "semantic",
                        t.line,
                        t.col,
                        format!(
                            "a {} entry takes {} basis name(s), found {}",
                            kind.keyword(),
                            kind.arity(),
                            eq.lhs.len()
                        ),
                    ));
                }
                // laction/raction pair an algebra element with a module one
                let mut idx = Vec::with_capacity(eq.lhs.len());
                for (s, t) in eq.lhs.iter().enumerate() {
                    let home = match kind {
                        BlockKind::Laction | BlockKind::Raction if s == 1 => &module,
                        BlockKind::Laction | BlockKind::Raction => &src,
                        BlockKind::Cochain(_) => &src,
                        _ => &module,
                    };
                    idx.push(basis_index(home, t)?);
                }
                if filled.contains(&idx) {
                    let t = &eq.lhs[0];
                    return Err(err(
                        "semantic",
                        t.line,
                        t.col,
                        "duplicate entry for this basis tuple",
                    ));
                }
                filled.push(idx.clone());
                let val = eval(&eq.rhs, &ctx)?;
                let t = &eq.lhs[0];
                if kind == BlockKind::Form {
                    form.as_mut().unwrap()[idx[0]][idx[1]] = val.scalar;
                } else {
                    if !val.scalar.is_zero() {
                        return Err(err(
                            "semantic",
                            t.line,
                            t.col,
                            "right-hand side has a term without a basis factor",
                        ));
                    }
                    let elem = Element::new(&value_module, val.vector);
                    match kind {
                        BlockKind::Map => map_images.as_mut().unwrap()[idx[0]] = elem,
                        BlockKind::Cochain(_) => coch.as_mut().unwrap().set(&idx, elem),
                        _ => lam.as_mut().unwrap().set(idx[0], idx[1], elem),
                    }
                }
            }

            match kind {
                BlockKind::Product => def.product = Some(lam.unwrap()),
                BlockKind::Bracket => def.bracket = Some(lam.unwrap()),
                BlockKind::Laction => def.laction = Some(lam.unwrap()),
                BlockKind::Raction => def.raction = Some(lam.unwrap()),
                BlockKind::Cochain(_) => def.cochains.push(coch.unwrap()),
                BlockKind::Map => {
                    def.maps
                        .push(ModuleMap::from_images(&module, map_images.unwrap()));
                }
                BlockKind::Form => {
                    let f = ConformalBilinearForm::new(&module, form.unwrap())
                        .expect("form entries validated during evaluation");
                    def.form = Some(f);
                }
            }
        }
        defs.push(def);
    }
    Ok(DefinitionFile {
        ring,
        modules: defs,
    })
}

pub fn parse_definition(text: &str) -> Result<DefinitionFile, Error> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let ast = p.file()?;
    build(&ast)
}

impl DefinitionFile {
    fn algebra_def(&self) -> Result<&ModuleDef, Error> {
        self.modules
            .iter()
            .find(|d| d.is_algebra)
            .ok_or_else(|| Error::Input("no algebra declaration in input".into()))
    }

    /// The first algebra with a product block, axioms unchecked.
    pub fn lsc(&self) -> Result<LscAlgebra, Error> {
        let d = self
            .modules
            .iter()
            .find(|d| d.is_algebra && d.product.is_some())
            .ok_or_else(|| Error::Input("no product block in input".into()))?;
        Ok(LscAlgebra::new_unchecked(
            d.module.clone(),
            d.product.clone().unwrap(),
        ))
    }

    /// The first algebra with a bracket block, axioms unchecked.
    pub fn lie(&self) -> Result<LieConformalAlgebra, Error> {
        let d = self
            .modules
            .iter()
            .find(|d| d.is_algebra && d.bracket.is_some())
            .ok_or_else(|| Error::Input("no bracket block in input".into()))?;
        Ok(LieConformalAlgebra::new_unchecked(
            d.module.clone(),
            d.bracket.clone().unwrap(),
        ))
    }

    /// The algebra together with the first module carrying an laction
    /// block; a missing raction defaults to zero. Identities unchecked.
    pub fn rep(&self) -> Result<RepPair, Error> {
        let a = self.lsc()?;
        let d = self
            .modules
            .iter()
            .find(|d| d.laction.is_some())
            .ok_or_else(|| Error::Input("no laction block in input".into()))?;
        let l = d.laction.clone().unwrap();
        let r = d
            .raction
            .clone()
            .unwrap_or_else(|| LambdaMap::zero(&self.ring, &a.module, &d.module, &d.module));
        Ok(RepPair::new_unchecked(a, l, r))
    }

    /// The first cochain block in the file.
    pub fn cochain(&self) -> Result<&Cochain, Error> {
        self.modules
            .iter()
            .flat_map(|d| d.cochains.iter())
            .next()
            .ok_or_else(|| Error::Input("no cochain block in input".into()))
    }

    /// The first map block in the file.
    pub fn module_map(&self) -> Result<&ModuleMap, Error> {
        self.modules
            .iter()
            .flat_map(|d| d.maps.iter())
            .next()
            .ok_or_else(|| Error::Input("no map block in input".into()))
    }

    /// The first form block in the file.
    pub fn form(&self) -> Result<&ConformalBilinearForm, Error> {
        self.modules
            .iter()
            .filter_map(|d| d.form.as_ref())
            .next()
            .ok_or_else(|| Error::Input("no form block in input".into()))
    }

    /// The first algebra's module (used to resolve cochain/map targets).
    pub fn algebra_module(&self) -> Result<Arc<FreeModule>, Error> {
        Ok(self.algebra_def()?.module.clone())
    }
}

// -------------------------------------------------------------- renderer

pub fn render_element(e: &Element) -> String {
    let parts: Vec<String> = e
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| format!("({}) {}", p, e.module.basis[i]))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn render_lambda_block(out: &mut String, kw: &str, left: &Arc<FreeModule>, lam: &LambdaMap) {
    out.push_str(&format!("  {kw}\n"));
    for i in 0..left.rank() {
        for j in 0..lam.right.rank() {
            let v = lam.entry(i, j);
            if !v.is_zero() {
                out.push_str(&format!(
                    "    {} {} = {};\n",
                    left.basis[i],
                    lam.right.basis[j],
                    render_element(v)
                ));
            }
        }
    }
}

/// Canonical text for a definition file; `parse_definition` of the output
/// rebuilds an identical file.
pub fn render_definition(df: &DefinitionFile) -> String {
    let mut out = String::new();
    if df.ring.n_params() > 0 {
        out.push_str(&format!("param {};\n", df.ring.params().join(", ")));
    }
    for d in &df.modules {
        let kw = if d.is_algebra { "algebra" } else { "module" };
        out.push_str(&format!("{kw} {} {{\n", d.name));
        out.push_str(&format!("  basis {};\n", d.module.basis.join(" ")));
        if let Some(p) = &d.product {
            render_lambda_block(&mut out, "product", &d.module, p);
        }
        if let Some(b) = &d.bracket {
            render_lambda_block(&mut out, "bracket", &d.module, b);
        }
        if let Some(l) = &d.laction {
            render_lambda_block(&mut out, "laction", &l.left, l);
        }
        if let Some(r) = &d.raction {
            render_lambda_block(&mut out, "raction", &r.left, r);
        }
        for c in &d.cochains {
            out.push_str(&format!("  cochain {}\n", c.n));
            for t in tuples(c.source.rank(), c.n) {
                let v = c.get(&t);
                if !v.is_zero() {
                    let names: Vec<&str> = t.iter().map(|&i| c.source.basis[i].as_str()).collect();
                    out.push_str(&format!("    {} = {};\n", names.join(" "), render_element(v)));
                }
            }
        }
        if let Some(f) = &d.form {
            out.push_str("  form\n");
            for i in 0..d.module.rank() {
                for j in 0..d.module.rank() {
                    if !f.mat[i][j].is_zero() {
                        out.push_str(&format!(
                            "    {} {} = {};\n",
                            d.module.basis[i], d.module.basis[j], f.mat[i][j]
                        ));
                    }
                }
            }
        }
        for m in &d.maps {
            out.push_str("  map\n");
            for (i, img) in m.mat.iter().enumerate() {
                if !img.is_zero() {
                    out.push_str(&format!(
                        "    {} = {};\n",
                        d.module.basis[i],
                        render_element(img)
                    ));
                }
            }
        }
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    fn pos(e: &Error) -> (usize, usize) {
        match e {
            Error::Lang { line, col, .. } => (*line, *col),
            other => panic!("expected a language error, got {other}"),
        }
    }

    #[test]
    fn parses_the_basic_algebra() {
        let text = "algebra A { param c; basis a; product a a = (D + L + c) a; }";
        let df = parse_definition(text).unwrap();
        let a = df.lsc().unwrap();
        assert!(a.check_axioms().pass());
        let ring = a.ring();
        let expect = Poly::var(ring, Ring::D)
            .add(&Poly::var(ring, Ring::lambda(1)))
            .add(&Poly::var(ring, ring.param("c").unwrap()));
        assert_eq!(a.product.entry(0, 0).coeffs[0], expect);
    }

    #[test]
    fn empty_product_block_is_the_zero_algebra() {
        let df = parse_definition("algebra Z { basis a; product }").unwrap();
        let a = df.lsc().unwrap();
        assert!(a.product.is_zero());
        assert!(a.check_axioms().pass());
    }

    #[test]
    fn rejects_m_in_a_product_block() {
        let e = parse_definition("algebra A { basis a; product a a = (D + M) a; }").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("M is not permitted in a product block"), "{msg}");
        assert_eq!(pos(&e), (1, 41));
    }

    #[test]
    fn numeric_and_power_syntax() {
        let text = "algebra A { basis a; product a a = (1/2 D^2 - 3*L + 2) a; }";
        let df = parse_definition(text).unwrap();
        let a = df.lsc().unwrap();
        let ring = a.ring().clone();
        let d = Poly::var(&ring, Ring::D);
        let l = Poly::var(&ring, Ring::lambda(1));
        let expect = d
            .mul(&d)
            .scale(&crate::poly::rat(1, 2))
            .sub(&l.scale(&rat_int(3)))
            .add(&Poly::int(&ring, 2));
        assert_eq!(a.product.entry(0, 0).coeffs[0], expect);
    }

    #[test]
    fn diagnostics_carry_position() {
        // missing semicolon
        let e = parse_definition("algebra A { basis a; product a a = (D) a }").unwrap_err();
        assert_eq!(pos(&e), (1, 42));
        // undeclared name
        let e = parse_definition("algebra A { basis a; product a a = (D + q) a; }").unwrap_err();
        assert!(e.to_string().contains("undeclared name \"q\""));
        // unknown character
        let e = parse_definition("algebra A { basis a; product a a = @; }").unwrap_err();
        assert_eq!(pos(&e), (1, 36));
        // reserved basis name
        let e = parse_definition("algebra A { basis L3; }").unwrap_err();
        assert!(e.to_string().contains("reserved"));
        // basis element squared
        let e = parse_definition("algebra A { basis a; product a a = a a; }").unwrap_err();
        assert!(e.to_string().contains("cannot be multiplied"));
        // missing basis factor
        let e = parse_definition("algebra A { basis a; product a a = D; }").unwrap_err();
        assert!(e.to_string().contains("without a basis factor"));
    }

    #[test]
    fn module_with_actions_builds_a_rep() {
        let text = "param c, c1, c2;\n\
                    algebra A { basis a; product a a = (D + L + c) a; }\n\
                    module M { basis m; laction a m = (D + c1 L + c2) m; }";
        let df = parse_definition(text).unwrap();
        let rep = df.rep().unwrap();
        assert!(rep.check().pass());
        assert!(rep.r.is_zero());
    }

    #[test]
    fn cochain_form_and_map_blocks() {
        let text = "algebra A { basis a;\n\
                    product a a = (D + L) a;\n\
                    cochain 2 a a = (L1) a;\n\
                    form a a = L;\n\
                    map a = (D) a;\n\
                    }";
        let df = parse_definition(text).unwrap();
        let c = df.cochain().unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(
            c.get(&[0, 0]).coeffs[0],
            Poly::var(&df.ring, Ring::lambda(1))
        );
        let f = df.form().unwrap();
        assert_eq!(f.mat[0][0], Poly::var(&df.ring, Ring::lambda(1)));
        let m = df.module_map().unwrap();
        assert_eq!(m.mat[0].coeffs[0], Poly::var(&df.ring, Ring::D));
        // a 2-cochain admits only L1; L2 needs degree 3
        let e = parse_definition(
            "algebra A { basis a; cochain 2 a a = (L2) a; }",
        )
        .unwrap_err();
        assert!(e.to_string().contains("not permitted"));
        assert!(parse_definition("algebra A { basis a; cochain 3 a a a = (L2) a; }").is_ok());
        // D is rejected in form blocks
        let e = parse_definition("algebra A { basis a; form a a = D; }").unwrap_err();
        assert!(e.to_string().contains("not permitted in a form block"));
        // L is rejected in map blocks
        let e = parse_definition("algebra A { basis a; map a = (L) a; }").unwrap_err();
        assert!(e.to_string().contains("not permitted in a map block"));
    }

    #[test]
    fn round_trip_is_the_identity() {
        let texts = [
            "algebra A { param c; basis a; product a a = (D + L + c) a; }",
            "algebra Z { basis a; product }",
            "param k;\nalgebra B { basis e1 e2; product e1 e1 = (k) e1 + (D) e2; e1 e2 = (L) e2; }",
            "algebra A { basis a; product a a = (D + L) a; cochain 2 a a = (L1^2) a; form a a = 2*L; map a = (D - 1/3) a; }",
        ];
        for text in texts {
            let once = render_definition(&parse_definition(text).unwrap());
            let twice = render_definition(&parse_definition(&once).unwrap());
            assert_eq!(once, twice, "render not stable for {text}");
        }
    }

    #[test]
    fn comments_and_whitespace_are_ignored()
    {
        let text = "# the base example\nalgebra A {\n  basis a; # one generator\n  product a a = (D + L) a;\n}\n";
        assert!(parse_definition(text).is_ok());
    }

    #[test]
    fn name_collisions_are_rejected() {
        assert!(parse_definition("param c; algebra A { basis c; }").is_err());
        assert!(parse_definition("param c, c; algebra A { basis a; }").is_err());
        assert!(parse_definition("algebra A { basis a a; }").is_err());
        assert!(parse_definition("param D; algebra A { basis a; }").is_err());
        assert!(parse_definition("algebra A { }").is_err());
    }
}
