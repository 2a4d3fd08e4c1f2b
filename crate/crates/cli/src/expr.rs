//! Construction expressions such as `ltimes-k2(R5.4)` or `bipartite-double(ltimes-k2(G3))`.
//!
//! ```text
//! expr := atom | name '(' arg (',' arg)* ')'
//! arg  := expr | integer
//! atom := catalog id
//! ```

use signed02::catalog::Catalog;
use signed02::constructions::{
    bipartite_double, cartesian_k2, complete, complete_bipartite, cycle, folded_cube, hypercube, ltimes_k2,
    negation, signed_cube,
};
use signed02::SignedGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Arg {
    Int(usize),
    Graph(SignedGraph),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    catalog: &'a Catalog,
}

pub fn evaluate(src: &str, catalog: &Catalog) -> Result<SignedGraph, String> {
    let mut p = Parser { src, pos: 0, catalog };
    let g = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(format!("unexpected `{}` at offset {}", &src[p.pos..], p.pos));
    }
    Ok(g)
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(format!("expected `{c}` at offset {}", self.pos))
        }
    }

    fn word(&mut self) -> Result<&str, String> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|c: char| !(c.is_alphanumeric() || c == '-' || c == '.' || c == '_')).unwrap_or(rest.len());
        if len == 0 {
            return Err(format!("expected a name at offset {start}"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn expr(&mut self) -> Result<SignedGraph, String> {
        match self.arg()? {
            Arg::Graph(g) => Ok(g),
            Arg::Int(k) => Err(format!("expected a graph, found the number {k}")),
        }
    }

    fn arg(&mut self) -> Result<Arg, String> {
        let name = self.word()?.to_string();
        if let Ok(k) = name.parse::<usize>() {
            return Ok(Arg::Int(k));
        }
        if self.peek() != Some('(') {
            return self.catalog.signed(&name).map(Arg::Graph).map_err(|e| e.to_string());
        }
        self.expect('(')?;
        let mut args = vec![self.arg()?];
        while self.peek() == Some(',') {
            self.expect(',')?;
            args.push(self.arg()?);
        }
        self.expect(')')?;
        apply(&name, args).map(Arg::Graph)
    }
}

fn apply(name: &str, args: Vec<Arg>) -> Result<SignedGraph, String> {
    let graph = |args: &[Arg]| match args {
        [Arg::Graph(g)] => Ok(g.clone()),
        _ => Err(format!("{name} takes one graph argument")),
    };
    let ints = |args: &[Arg], k: usize| -> Result<Vec<usize>, String> {
        let v: Vec<usize> = args
            .iter()
            .filter_map(|a| match a {
                Arg::Int(x) => Some(*x),
                Arg::Graph(_) => None,
            })
            .collect();
        if v.len() == k && args.len() == k {
            Ok(v)
        } else {
            Err(format!("{name} takes {k} integer argument(s)"))
        }
    };
    match name {
        "ltimes-k2" => Ok(ltimes_k2(&graph(&args)?)),
        "cartesian-k2" => Ok(cartesian_k2(&graph(&args)?)),
        "bipartite-double" => Ok(bipartite_double(&graph(&args)?)),
        "negation" => Ok(negation(&graph(&args)?)),
        "underlying" => Ok(graph(&args)?.support().to_signed()),
        "signed-cube" => signed_cube(ints(&args, 1)?[0]).map_err(|e| e.to_string()),
        "hypercube" => Ok(hypercube(ints(&args, 1)?[0]).to_signed()),
        "folded-cube" => folded_cube(ints(&args, 1)?[0]).map(|g| g.to_signed()).map_err(|e| e.to_string()),
        "cycle" => {
            let n = ints(&args, 1)?[0];
            if n < 3 {
                return Err("cycle needs at least 3 vertices".into());
            }
            Ok(cycle(n).to_signed())
        }
        "complete" => Ok(complete(ints(&args, 1)?[0]).to_signed()),
        "complete-bipartite" => {
            let v = ints(&args, 2)?;
            Ok(complete_bipartite(v[0], v[1]).to_signed())
        }
        _ => Err(format!("unknown construction `{name}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use signed02::certify_two_sym;

    #[test]
    fn nested_expressions() {
        let cat = Catalog::new();
        let g = evaluate("ltimes-k2(R5.4)", &cat).unwrap();
        assert_eq!(g.n(), 32);
        assert_eq!(certify_two_sym(&g).unwrap().lambda_sq, 6);
        assert_eq!(evaluate(" signed-cube( 3 ) ", &cat).unwrap(), signed_cube(3).unwrap());
        assert_eq!(evaluate("bipartite-double(K4)", &cat).unwrap().n(), 8);
        assert!(evaluate("ltimes-k2(R5.4", &cat).is_err());
        assert!(evaluate("nope(G2)", &cat).is_err());
        assert!(evaluate("signed-cube(G2)", &cat).is_err());
        assert!(evaluate("G2 G3", &cat).is_err());
    }
}
