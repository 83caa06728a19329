//! A Turtle reader covering what a class hierarchy needs.
//!
//! Recognized: `@prefix`/`PREFIX`, `@base`/`BASE`, `rdf:type owl:Class`,
//! `rdfs:subClassOf` between named classes, `rdfs:label` and `rdfs:comment`.
//! Every other triple (restrictions, axioms, annotations, individuals) is
//! parsed, counted in [`TurtleParse::skipped`], and dropped.

use std::collections::{BTreeMap, BTreeSet};

use super::{ConceptDocument, ConceptId, ConceptKind, RulesSidecar, Taxonomy, TaxonomyDocument, TaxonomyError};

const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
const OWL: &str = "http://www.w3.org/2002/07/owl#";

/// Maps root concept ids to the kind they define.
#[derive(Debug, Clone, PartialEq)]
pub struct KindRoots(pub BTreeMap<ConceptId, ConceptKind>);

impl Default for KindRoots {
    fn default() -> Self {
        KindRoots(
            ConceptKind::ALL
                .iter()
                .map(|k| (ConceptId::new(k.default_root()).expect("valid root id"), *k))
                .collect(),
        )
    }
}

#[derive(Debug, Clone)]
pub struct TurtleParse {
    pub document: TaxonomyDocument,
    pub skipped: usize,
}

/// Loads a Turtle taxonomy, taking rules and an optional kind-root mapping from a sidecar.
pub fn load(source: &str, sidecar: Option<&RulesSidecar>) -> Result<Taxonomy, TaxonomyError> {
    let roots = match sidecar {
        Some(s) if !s.kind_roots.is_empty() => KindRoots(s.kind_roots.clone()),
        _ => KindRoots::default(),
    };
    let mut parsed = parse(source, &roots)?;
    if let Some(s) = sidecar {
        parsed.document.rules = s.rules.clone();
    }
    let skipped = parsed.skipped;
    let mut t = Taxonomy::from_document(parsed.document)?;
    t.skipped_statements = skipped;
    Ok(t)
}

pub fn parse(source: &str, roots: &KindRoots) -> Result<TurtleParse, TaxonomyError> {
    let tokens = Lexer::new(source).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        prefixes: BTreeMap::new(),
        base: String::new(),
        triples: Vec::new(),
    };
    parser.document()?;
    build_document(parser.triples, roots)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Iri(String),
    PName(String, String),
    Literal(String),
    LangTag,
    Carets,
    BlankLabel,
    Keyword(String),
    Number,
    Dot,
    Semicolon,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, message: impl Into<String>) -> TaxonomyError {
        TaxonomyError::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, TaxonomyError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '#' {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(&c) = self.chars.peek() else { break };
            let tok = match c {
                '<' => {
                    self.bump();
                    let mut iri = String::new();
                    loop {
                        match self.bump() {
                            Some('>') => break,
                            Some(c) if c.is_whitespace() => return Err(self.err("whitespace in IRI")),
                            Some(c) => iri.push(c),
                            None => return Err(self.err("unterminated IRI")),
                        }
                    }
                    Tok::Iri(iri)
                }
                '"' | '\'' => Tok::Literal(self.string(c)?),
                '@' => {
                    self.bump();
                    let word = self.word();
                    match word.as_str() {
                        "prefix" | "base" => Tok::Keyword(format!("@{word}")),
                        "" => return Err(self.err("empty language tag")),
                        _ => Tok::LangTag,
                    }
                }
                '^' => {
                    self.bump();
                    if self.bump() != Some('^') {
                        return Err(self.err("expected `^^`"));
                    }
                    Tok::Carets
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                ';' => {
                    self.bump();
                    Tok::Semicolon
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '[' => {
                    self.bump();
                    Tok::LBracket
                }
                ']' => {
                    self.bump();
                    Tok::RBracket
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '_' => {
                    self.bump();
                    if self.bump() != Some(':') {
                        return Err(self.err("expected `_:` blank node label"));
                    }
                    self.word();
                    Tok::BlankLabel
                }
                c if c.is_ascii_digit() || c == '+' || c == '-' => {
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || matches!(c, '.' | '+' | '-') {
                            // a trailing '.' terminates the statement
                            if c == '.' {
                                let mut look = self.chars.clone();
                                look.next();
                                if !look.peek().is_some_and(|n| n.is_ascii_digit()) {
                                    break;
                                }
                            }
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Number
                }
                c if c.is_alphabetic() || c == ':' => {
                    let word = self.word();
                    if let Some(idx) = word.find(':') {
                        let (p, l) = word.split_at(idx);
                        Tok::PName(p.to_string(), l[1..].to_string())
                    } else {
                        Tok::Keyword(word)
                    }
                }
                other => return Err(self.err(format!("unexpected character `{other}`"))),
            };
            out.push(Spanned { tok, line, column });
        }
        Ok(out)
    }

    /// Name characters; a trailing '.' is left for the statement terminator.
    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '%') {
                s.push(c);
                self.bump();
            } else if c == '.' {
                let mut look = self.chars.clone();
                look.next();
                if look
                    .peek()
                    .is_some_and(|n| n.is_alphanumeric() || matches!(n, '_' | '-' | ':'))
                {
                    s.push(c);
                    self.bump();
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        s
    }

    fn string(&mut self, quote: char) -> Result<String, TaxonomyError> {
        let unterminated = TaxonomyError::Parse {
            line: self.line,
            column: self.column,
            message: "unterminated string literal".into(),
        };
        self.bump();
        let mut long = false;
        let mut look = self.chars.clone();
        if look.next() == Some(quote) && look.next() == Some(quote) {
            self.bump();
            self.bump();
            long = true;
        } else if self.chars.peek() == Some(&quote) {
            self.bump();
            return Ok(String::new());
        }
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(unterminated),
                Some('\\') => match self.bump() {
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some('r') => s.push('\r'),
                    Some(c @ ('"' | '\'' | '\\')) => s.push(c),
                    Some('u') => s.push(self.unicode_escape(4)?),
                    Some('U') => s.push(self.unicode_escape(8)?),
                    _ => return Err(self.err("invalid escape sequence")),
                },
                Some(c) if c == quote => {
                    if !long {
                        break;
                    }
                    let mut look = self.chars.clone();
                    if look.next() == Some(quote) && look.next() == Some(quote) {
                        self.bump();
                        self.bump();
                        break;
                    }
                    s.push(c);
                }
                Some('\n') if !long => return Err(unterminated),
                Some(c) => s.push(c),
            }
        }
        Ok(s)
    }

    fn unicode_escape(&mut self, n: usize) -> Result<char, TaxonomyError> {
        let mut hex = String::new();
        for _ in 0..n {
            hex.push(self.bump().ok_or_else(|| self.err("truncated unicode escape"))?);
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.err("invalid unicode escape"))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Term {
    Iri(String),
    Blank,
    Literal(String),
    Other,
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    prefixes: BTreeMap<String, String>,
    base: String,
    triples: Vec<(Term, Term, Term)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|s| &s.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn err(&self, message: impl Into<String>) -> TaxonomyError {
        let (line, column) = match self.tokens.get(self.pos).or(self.tokens.last()) {
            Some(s) => (s.line, s.column),
            None => (1, 1),
        };
        TaxonomyError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), TaxonomyError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn document(&mut self) -> Result<(), TaxonomyError> {
        while let Some(tok) = self.peek().cloned() {
            match tok {
                Tok::Keyword(k) if k == "@prefix" || k.eq_ignore_ascii_case("prefix") => {
                    self.pos += 1;
                    let Some(Tok::PName(p, local)) = self.next() else {
                        self.pos -= 1;
                        return Err(self.err("expected prefix name"));
                    };
                    if !local.is_empty() {
                        self.pos -= 1;
                        return Err(self.err("prefix name must end with `:`"));
                    }
                    let Some(Tok::Iri(iri)) = self.next() else {
                        self.pos -= 1;
                        return Err(self.err("expected IRI after prefix name"));
                    };
                    let iri = self.resolve(&iri);
                    self.prefixes.insert(p, iri);
                    if k == "@prefix" {
                        self.expect(Tok::Dot, "`.` after @prefix")?;
                    }
                }
                Tok::Keyword(k) if k == "@base" || k.eq_ignore_ascii_case("base") => {
                    self.pos += 1;
                    let Some(Tok::Iri(iri)) = self.next() else {
                        self.pos -= 1;
                        return Err(self.err("expected IRI after base"));
                    };
                    self.base = iri;
                    if k == "@base" {
                        self.expect(Tok::Dot, "`.` after @base")?;
                    }
                }
                _ => {
                    self.triples_statement()?;
                }
            }
        }
        Ok(())
    }

    fn resolve(&self, iri: &str) -> String {
        if iri.contains(':') || self.base.is_empty() {
            iri.to_string()
        } else {
            format!("{}{}", self.base, iri)
        }
    }

    fn triples_statement(&mut self) -> Result<(), TaxonomyError> {
        let subject = if self.peek() == Some(&Tok::LBracket) {
            self.pos += 1;
            if self.peek() != Some(&Tok::RBracket) {
                self.predicate_object_list(&Term::Blank)?;
            }
            self.expect(Tok::RBracket, "`]`")?;
            if self.peek() == Some(&Tok::Dot) {
                self.pos += 1;
                return Ok(());
            }
            Term::Blank
        } else {
            self.term(false)?
        };
        self.predicate_object_list(&subject)?;
        self.expect(Tok::Dot, "`.` at end of statement")
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), TaxonomyError> {
        loop {
            let predicate = match self.peek() {
                Some(Tok::Keyword(k)) if k == "a" => {
                    self.pos += 1;
                    Term::Iri(format!("{RDF}type"))
                }
                _ => self.term(false)?,
            };
            loop {
                let object = self.object()?;
                self.triples.push((subject.clone(), predicate.clone(), object));
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if self.peek() == Some(&Tok::Semicolon) {
                while self.peek() == Some(&Tok::Semicolon) {
                    self.pos += 1;
                }
                if matches!(self.peek(), Some(Tok::Dot) | Some(Tok::RBracket) | None) {
                    return Ok(());
                }
            } else {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, TaxonomyError> {
        match self.peek() {
            Some(Tok::LBracket) => {
                self.pos += 1;
                if self.peek() != Some(&Tok::RBracket) {
                    self.predicate_object_list(&Term::Blank)?;
                }
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Term::Blank)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                while self.peek() != Some(&Tok::RParen) {
                    if self.peek().is_none() {
                        return Err(self.err("unterminated collection"));
                    }
                    self.object()?;
                }
                self.pos += 1;
                Ok(Term::Other)
            }
            _ => self.term(true),
        }
    }

    fn term(&mut self, allow_literal: bool) -> Result<Term, TaxonomyError> {
        match self.next() {
            Some(Tok::Iri(iri)) => Ok(Term::Iri(self.resolve(&iri))),
            Some(Tok::PName(p, local)) => match self.prefixes.get(&p) {
                Some(ns) => Ok(Term::Iri(format!("{ns}{local}"))),
                None => {
                    self.pos -= 1;
                    Err(self.err(format!("undeclared prefix `{p}:`")))
                }
            },
            Some(Tok::BlankLabel) => Ok(Term::Blank),
            Some(Tok::Literal(s)) if allow_literal => {
                match self.peek() {
                    Some(Tok::LangTag) => self.pos += 1,
                    Some(Tok::Carets) => {
                        self.pos += 1;
                        self.term(false)?;
                    }
                    _ => {}
                }
                Ok(Term::Literal(s))
            }
            Some(Tok::Number) if allow_literal => Ok(Term::Other),
            Some(Tok::Keyword(k)) if allow_literal && (k == "true" || k == "false") => Ok(Term::Other),
            _ => {
                self.pos -= 1;
                Err(self.err("expected IRI, prefixed name, or blank node"))
            }
        }
    }
}

/// Local name of an IRI: the part after the last `#`, `/`, or `:`.
fn local_name(iri: &str) -> &str {
    let cut = iri.rfind(['#', '/', ':']).map(|i| i + 1).unwrap_or(0);
    &iri[cut..]
}

#[derive(Default)]
struct ClassInfo {
    parents: BTreeSet<String>,
    label: Option<String>,
    comment: Option<String>,
}

fn build_document(triples: Vec<(Term, Term, Term)>, roots: &KindRoots) -> Result<TurtleParse, TaxonomyError> {
    let rdf_type = format!("{RDF}type");
    let sub_class_of = format!("{RDFS}subClassOf");
    let label = format!("{RDFS}label");
    let comment = format!("{RDFS}comment");
    let owl_class = format!("{OWL}Class");
    let rdfs_class = format!("{RDFS}Class");
    let owl_thing = format!("{OWL}Thing");

    let mut classes: BTreeMap<String, ClassInfo> = BTreeMap::new();
    let mut annotations: Vec<(String, bool, String)> = Vec::new();
    let mut skipped = 0usize;

    for (s, p, o) in triples {
        let (Term::Iri(s), Term::Iri(p)) = (&s, &p) else {
            skipped += 1;
            continue;
        };
        match &o {
            Term::Iri(o) if *p == rdf_type && (*o == owl_class || *o == rdfs_class) => {
                classes.entry(s.clone()).or_default();
            }
            Term::Iri(o) if *p == sub_class_of => {
                classes.entry(s.clone()).or_default();
                if *o != owl_thing {
                    classes.entry(o.clone()).or_default();
                    classes.get_mut(s).expect("inserted").parents.insert(o.clone());
                }
            }
            Term::Literal(text) if *p == label || *p == comment => {
                annotations.push((s.clone(), *p == label, text.clone()));
            }
            _ => skipped += 1,
        }
    }

    for (s, is_label, text) in annotations {
        match classes.get_mut(&s) {
            Some(info) => {
                let slot = if is_label { &mut info.label } else { &mut info.comment };
                if slot.is_none() {
                    *slot = Some(text);
                } else {
                    skipped += 1;
                }
            }
            None => skipped += 1,
        }
    }

    // IRI -> concept id
    let mut ids: BTreeMap<&str, ConceptId> = BTreeMap::new();
    let mut by_id: BTreeMap<ConceptId, &str> = BTreeMap::new();
    for iri in classes.keys() {
        let local = local_name(iri);
        let id = ConceptId::new(local).map_err(|_| TaxonomyError::InvalidId(iri.clone()))?;
        if by_id.insert(id.clone(), iri).is_some() {
            return Err(TaxonomyError::DuplicateId(id));
        }
        ids.insert(iri, id);
    }

    // kind roots drop their own parents; everything else inherits kinds from the roots it reaches
    let mut kinds: BTreeMap<ConceptId, BTreeSet<ConceptKind>> = BTreeMap::new();
    let mut parents: BTreeMap<ConceptId, Vec<ConceptId>> = BTreeMap::new();
    for (iri, info) in &classes {
        let id = &ids[iri.as_str()];
        if roots.0.contains_key(id) {
            parents.insert(id.clone(), Vec::new());
        } else {
            parents.insert(id.clone(), info.parents.iter().map(|p| ids[p.as_str()].clone()).collect());
        }
    }
    for id in parents.keys() {
        let mut seen = BTreeSet::new();
        let mut stack = vec![id.clone()];
        let mut found = BTreeSet::new();
        while let Some(c) = stack.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            if let Some(k) = roots.0.get(&c) {
                found.insert(*k);
            }
            stack.extend(parents[&c].iter().cloned());
        }
        kinds.insert(id.clone(), found);
    }

    let mut concepts = Vec::new();
    for (iri, info) in &classes {
        let id = &ids[iri.as_str()];
        let found = &kinds[id];
        let kind = match found.len() {
            0 => {
                // outside every kind branch (e.g. an umbrella class above the roots)
                skipped += 1;
                continue;
            }
            1 => *found.iter().next().expect("one kind"),
            _ => {
                let mut it = found.iter();
                let (a, b) = (*it.next().expect("kind"), *it.next().expect("kind"));
                return Err(TaxonomyError::KindMismatch {
                    concept: id.clone(),
                    concept_kind: a,
                    parent: id.clone(),
                    parent_kind: b,
                });
            }
        };
        concepts.push(ConceptDocument {
            id: id.clone(),
            label: Some(info.label.clone().unwrap_or_else(|| id.to_string())),
            definition: Some(info.comment.clone().unwrap_or_default()),
            kind,
            parents: parents[id].clone(),
        });
    }

    Ok(TurtleParse {
        document: TaxonomyDocument {
            version: String::new(),
            concepts,
            rules: Vec::new(),
        },
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::{load_taxonomy, TaxonomyFormat};

    const TEN: &str = r#"
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix mm: <http://example.org/metamorph#> .

mm:MorphologicalSubdivision a owl:Class ; rdfs:label "Morphological Subdivision" .
mm:CoreSubdivision rdfs:subClassOf mm:MorphologicalSubdivision .
mm:ConnectingSubdivision rdfs:subClassOf mm:MorphologicalSubdivision .
mm:TerminalSubdivision rdfs:subClassOf mm:MorphologicalSubdivision .
mm:Body rdfs:subClassOf mm:CoreSubdivision ;
    rdfs:comment "Main structural part."@en .
mm:Torso rdfs:subClassOf mm:Body .
mm:Base rdfs:subClassOf mm:CoreSubdivision .
mm:Head rdfs:subClassOf mm:ConnectingSubdivision .
mm:Manipulator rdfs:subClassOf mm:TerminalSubdivision .
mm:Hand rdfs:subClassOf mm:Manipulator , [ a owl:Restriction ; owl:onProperty mm:partOf ; owl:someValuesFrom mm:Arm ] .
mm:Tool rdfs:subClassOf mm:Manipulator . # trailing comment
"#;

    #[test]
    fn ten_subclass_triples() {
        let t = load_taxonomy(TEN, TaxonomyFormat::TurtleSubset).unwrap();
        assert_eq!(t.edge_count(), 10);
        assert_eq!(t.len(), 11);
        // restriction blank node: the subClassOf to [] plus its three inner triples
        assert_eq!(t.skipped_statements(), 4);
        let torso = t.get("Torso").unwrap();
        assert_eq!(torso.parents.iter().map(|p| p.as_str()).collect::<Vec<_>>(), vec!["Body"]);
        assert_eq!(t.get("Body").unwrap().definition, "Main structural part.");
        assert_eq!(t.get("MorphologicalSubdivision").unwrap().label, "Morphological Subdivision");
        assert!(t.is_subsumed_by("Hand", "TerminalSubdivision").unwrap());
        assert!(t.concepts().all(|c| c.kind == ConceptKind::Subdivision));
        let again = load_taxonomy(TEN, TaxonomyFormat::TurtleSubset).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn umbrella_class_above_roots_is_dropped() {
        let src = r#"
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
PREFIX : <http://example.org/mm#>
:MorphologicalSubdivision rdfs:subClassOf :MetaMorphConcept .
:Body rdfs:subClassOf :MorphologicalSubdivision .
"#;
        let t = load_taxonomy(src, TaxonomyFormat::TurtleSubset).unwrap();
        assert!(!t.contains("MetaMorphConcept"));
        assert!(t.get("MorphologicalSubdivision").unwrap().parents.is_empty());
        assert_eq!(t.skipped_statements(), 1);
    }

    #[test]
    fn cycles_and_errors() {
        let cyc = r#"
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix : <http://x/#> .
:MorphologicalSubdivision rdfs:label "root" .
:A rdfs:subClassOf :B .
:B rdfs:subClassOf :A .
:A rdfs:subClassOf :MorphologicalSubdivision .
"#;
        assert!(matches!(
            load_taxonomy(cyc, TaxonomyFormat::TurtleSubset),
            Err(TaxonomyError::Cycle(_))
        ));
        let bad = "@prefix : <http://x/#> .\n:A :b \"unterminated .\n";
        match load_taxonomy(bad, TaxonomyFormat::TurtleSubset) {
            Err(TaxonomyError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let undeclared = "x:A x:b x:C .";
        assert!(matches!(
            load_taxonomy(undeclared, TaxonomyFormat::TurtleSubset),
            Err(TaxonomyError::Parse { line: 1, column: 1, .. })
        ));
    }

    #[test]
    fn sidecar_supplies_rules_and_roots() {
        let src = r#"
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix : <http://x/#> .
:Parts rdfs:label "parts" .
:Hand rdfs:subClassOf :Parts .
:Descriptors rdfs:label "d" .
:Grip rdfs:subClassOf :Descriptors .
"#;
        let sidecar = RulesSidecar::from_json(
            r#"{"kind_roots":{"Parts":"Subdivision","Descriptors":"Descriptor"},
                "rules":[{"descriptor":"Grip","general":false,"applicable_to":["Hand"]}]}"#,
        )
        .unwrap();
        let t = load(src, Some(&sidecar)).unwrap();
        assert_eq!(t.root(ConceptKind::Subdivision).unwrap().as_str(), "Parts");
        assert!(t.applicable_descriptors("Hand").unwrap().contains("Grip"));
        // without the mapping nothing reaches a known root
        let bare = load(src, None).unwrap();
        assert!(bare.is_empty());
    }

    #[test]
    fn local_names() {
        assert_eq!(local_name("http://a/b#C"), "C");
        assert_eq!(local_name("http://a/b/C"), "C");
        assert_eq!(local_name("urn:x:C"), "C");
    }
}
