//! Minimal f-structures for a fixed c-structure, by closing the defining
//! equations under identification.

use std::collections::{BTreeMap, BTreeSet};

use crate::grammar::{Grammar, LexSchema, Schema, SemForm, PRED, REL};
use crate::model::{CStructure, FNode, FNodeId, FStructure, Label, Model, TreeId, TreeNode};

use super::chart::Deriv;

/// Why a candidate tree has no minimal f-structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conflict {
    /// Two different atoms, or an atom and a feature, at one node.
    Clash(String),
    /// A lexical annotation on a root preterminal, which has no mother.
    NoMother(TreeId),
    /// No single node reaches the rest.
    NoInitial,
    Cyclic,
    /// The solution needs more f-nodes than allowed.
    TooLarge(usize),
}

/// How each tree node was built: by which rule or lexical entry.
pub(crate) struct Built {
    pub cstruct: CStructure,
    pub how: BTreeMap<TreeId, Deriv>,
}

/// Lays out a derivation with preorder ids.
pub(crate) fn build_tree(g: &Grammar, d: &Deriv) -> Built {
    fn go(
        g: &Grammar,
        d: &Deriv,
        cat: &str,
        mother: Option<TreeId>,
        nodes: &mut BTreeMap<TreeId, TreeNode>,
        how: &mut BTreeMap<TreeId, Deriv>,
    ) -> TreeId {
        let id = TreeId(nodes.len() as u32);
        nodes.insert(id, TreeNode { label: Label::Cat(cat.to_string()), mother, daughters: Vec::new() });
        let daughters = match d {
            Deriv::Lex { entry } => {
                let leaf = TreeId(nodes.len() as u32);
                let word = g.lexicon()[*entry].word.clone();
                nodes.insert(leaf, TreeNode { label: Label::Word(word), mother: Some(id), daughters: Vec::new() });
                how.insert(id, Deriv::Lex { entry: *entry });
                vec![leaf]
            }
            Deriv::Phrase { rule, kids } => {
                how.insert(id, Deriv::Phrase { rule: *rule, kids: Vec::new() });
                let rhs = &g.rules()[*rule].rhs;
                kids.iter().zip(rhs).map(|(k, dtr)| go(g, k, &dtr.cat, Some(id), nodes, how)).collect()
            }
        };
        nodes.get_mut(&id).expect("inserted above").daughters = daughters;
        id
    }
    let root_cat = match d {
        Deriv::Lex { entry } => g.lexicon()[*entry].cat.clone(),
        Deriv::Phrase { rule, .. } => g.rules()[*rule].lhs.clone(),
    };
    let mut nodes = BTreeMap::new();
    let mut how = BTreeMap::new();
    let root = go(g, d, &root_cat, None, &mut nodes, &mut how);
    Built { cstruct: CStructure::from_parts(root, nodes), how }
}

#[derive(Default)]
struct Store {
    parent: Vec<usize>,
    edges: Vec<BTreeMap<String, usize>>,
    atom: Vec<Option<String>>,
    clash: Option<String>,
}

impl Store {
    fn fresh(&mut self) -> usize {
        let v = self.parent.len();
        self.parent.push(v);
        self.edges.push(BTreeMap::new());
        self.atom.push(None);
        v
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// The node at `path` from `x`, created as needed.
    fn walk(&mut self, x: usize, path: &[String]) -> usize {
        let mut here = self.find(x);
        for f in path {
            here = match self.edges[here].get(f) {
                Some(&next) => self.find(next),
                None => {
                    let next = self.fresh();
                    self.edges[here].insert(f.clone(), next);
                    next
                }
            };
        }
        here
    }

    fn lookup(&mut self, x: usize, path: &[String]) -> Option<usize> {
        let mut here = self.find(x);
        for f in path {
            let next = *self.edges[here].get(f)?;
            here = self.find(next);
        }
        Some(here)
    }

    fn set_atom(&mut self, x: usize, a: &str) {
        let r = self.find(x);
        match &self.atom[r] {
            Some(b) if b != a => self.note_clash(format!("{b} and {a} at one node")),
            _ => self.atom[r] = Some(a.to_string()),
        }
    }

    fn note_clash(&mut self, msg: String) {
        self.clash.get_or_insert(msg);
    }

    /// Identifies `a` and `b` along with whatever their features force.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let mut changed = false;
        let mut work = vec![(a, b)];
        while let Some((a, b)) = work.pop() {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            changed = true;
            self.parent[rb] = ra;
            if let Some(atom) = self.atom[rb].take() {
                self.set_atom(ra, &atom);
            }
            for (f, child) in std::mem::take(&mut self.edges[rb]) {
                match self.edges[ra].get(&f) {
                    Some(&other) => work.push((other, child)),
                    None => {
                        self.edges[ra].insert(f, child);
                    }
                }
            }
        }
        changed
    }
}

/// The minimal model over `built`'s tree, if the defining equations have one.
pub(crate) fn solve(g: &Grammar, built: &Built, max_fnodes: usize) -> Result<Model, Conflict> {
    let c = &built.cstruct;
    let mut st = Store::default();
    let mut z: BTreeMap<TreeId, usize> = BTreeMap::new();
    let mut zvar = |st: &mut Store, t: TreeId| *z.entry(t).or_insert_with(|| st.fresh());
    let mut forms: Vec<(usize, usize, &SemForm)> = Vec::new();

    for (&n, how) in &built.how {
        match how {
            Deriv::Phrase { rule, .. } => {
                for (d, dtr) in c.daughters(n).iter().zip(&g.rules()[*rule].rhs) {
                    for s in &dtr.schemata {
                        match s {
                            Schema::UpPathEqDown { up, down } => {
                                let (zn, zd) = (zvar(&mut st, n), zvar(&mut st, *d));
                                let x = st.walk(zn, up);
                                let y = st.walk(zd, down);
                                st.union(x, y);
                            }
                            Schema::UpPathAtom { up, value } => {
                                let zn = zvar(&mut st, n);
                                let x = st.walk(zn, up);
                                st.set_atom(x, value);
                            }
                        }
                    }
                }
            }
            Deriv::Lex { entry } => {
                let schemata = &g.lexicon()[*entry].schemata;
                if schemata.is_empty() {
                    continue;
                }
                let m = c.mother(n).ok_or(Conflict::NoMother(n))?;
                let zm = zvar(&mut st, m);
                for s in schemata {
                    match s {
                        LexSchema::UpPathAtom { up, value } => {
                            let x = st.walk(zm, up);
                            st.set_atom(x, value);
                        }
                        LexSchema::SemForm(f) => {
                            let p = st.walk(zm, &[PRED.to_string()]);
                            let r = st.walk(p, &[REL.to_string()]);
                            st.set_atom(r, &f.rel);
                            for a in &f.args {
                                st.walk(p, a);
                            }
                            forms.push((p, zm, f));
                        }
                    }
                }
            }
        }
    }

    // a semantic-form argument is shared with the clause when the clause has it
    loop {
        let mut changed = false;
        for (p, x, f) in &forms {
            for a in &f.args {
                if let Some(xa) = st.lookup(*x, a) {
                    let pa = st.walk(*p, a);
                    changed |= st.union(pa, xa);
                }
            }
        }
        if !changed {
            break;
        }
    }
    if let Some(msg) = st.clash.take() {
        return Err(Conflict::Clash(msg));
    }

    let roots: BTreeSet<usize> = (0..st.parent.len()).map(|v| st.find(v)).collect();
    for &r in &roots {
        if st.atom[r].is_some() && !st.edges[r].is_empty() {
            return Err(Conflict::Clash(format!("atom {} with features", st.atom[r].as_deref().unwrap_or(""))));
        }
    }
    if roots.len() > max_fnodes {
        return Err(Conflict::TooLarge(roots.len()));
    }
    let id: BTreeMap<usize, FNodeId> = roots.iter().enumerate().map(|(i, r)| (*r, FNodeId(i as u32))).collect();
    let mut nodes: BTreeMap<FNodeId, FNode> = BTreeMap::new();
    let mut targets: BTreeSet<usize> = BTreeSet::new();
    for &r in &roots {
        let edges: Vec<(String, usize)> = st.edges[r].iter().map(|(f, v)| (f.clone(), *v)).collect();
        let mut trans = BTreeMap::new();
        for (f, v) in edges {
            let t = st.find(v);
            targets.insert(t);
            trans.insert(f, id[&t]);
        }
        nodes.insert(id[&r], FNode { trans, atom: st.atom[r].clone() });
    }

    let initial = match z.get(&c.root()) {
        Some(&v) => id[&st.find(v)],
        None => {
            let sources: Vec<usize> = roots.iter().copied().filter(|r| !targets.contains(r)).collect();
            match sources.as_slice() {
                [one] => id[one],
                [] if roots.is_empty() => {
                    nodes.insert(FNodeId(0), FNode::default());
                    FNodeId(0)
                }
                _ => return Err(Conflict::NoInitial),
            }
        }
    };
    if has_cycle(&nodes) {
        return Err(Conflict::Cyclic);
    }
    let zoomin = z.iter().map(|(t, v)| (*t, id[&st.find(*v)])).collect();
    let fstruct = FStructure::from_nodes(initial, nodes);
    Ok(Model::new(g.sig().clone(), c.clone(), fstruct, zoomin).canonical())
}

fn has_cycle(nodes: &BTreeMap<FNodeId, FNode>) -> bool {
    // 0 unvisited, 1 open, 2 done
    let mut state: BTreeMap<FNodeId, u8> = BTreeMap::new();
    for &start in nodes.keys() {
        if state.get(&start).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut stack: Vec<(FNodeId, Vec<FNodeId>)> = vec![(start, nodes[&start].trans.values().copied().collect())];
        state.insert(start, 1);
        while let Some((node, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(next) => match state.get(&next).copied().unwrap_or(0) {
                    1 => return true,
                    2 => {}
                    _ => {
                        state.insert(next, 1);
                        let succ = nodes.get(&next).map(|n| n.trans.values().copied().collect()).unwrap_or_default();
                        stack.push((next, succ));
                    }
                },
                None => {
                    state.insert(*node, 2);
                    stack.pop();
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::grammar::parse_grammar;
    use crate::search::chart::Chart;

    fn solve_all(g: &Grammar, s: &str) -> Vec<Result<Model, Conflict>> {
        let toks: Vec<String> = s.split_whitespace().map(String::from).collect();
        let mut chart = Chart::new(g, &toks);
        chart.derivations(g.start(), 64).iter().map(|d| solve(g, &build_tree(g, d), 64)).collect()
    }

    #[test]
    fn solves_figure1_to_the_fixture() {
        let g = fixtures::figure1_grammar();
        let out = solve_all(&g, "a girl walks");
        assert_eq!(out, vec![Ok(fixtures::a_girl_walks())]);
    }

    #[test]
    fn devour_solution_is_the_offending_fixture() {
        let g = fixtures::devour_grammar();
        assert_eq!(solve_all(&g, "a girl devours"), vec![Ok(fixtures::a_girl_devours())]);
    }

    #[test]
    fn clashes_and_cycles() {
        let text =
            "signature { cat: S N; atom: sg pl; feat: num f; }\nrule S -> N {(up num)=pl};\nlex n N {(up num)=sg};";
        let g = parse_grammar(text).unwrap();
        assert!(matches!(solve_all(&g, "n")[0], Err(Conflict::Clash(_))));

        let text = "signature { cat: S N; atom: sg; feat: num f; }\nrule S -> N {(up f)=down; up=down};\nlex n N;";
        let g = parse_grammar(text).unwrap();
        assert_eq!(solve_all(&g, "n")[0], Err(Conflict::Cyclic));

        let text =
            "signature { cat: S N; atom: sg; feat: num f; }\nrule S -> N {(up num)=sg; (up num f)=down};\nlex n N;";
        let g = parse_grammar(text).unwrap();
        assert!(matches!(solve_all(&g, "n")[0], Err(Conflict::Clash(_))));
    }

    #[test]
    fn no_equations_give_one_empty_node() {
        let text = "signature { cat: S N; atom: sg; feat: num; }\nrule S -> N;\nlex n N;";
        let g = parse_grammar(text).unwrap();
        let m = solve_all(&g, "n").remove(0).unwrap();
        assert_eq!(m.fstruct().len(), 1);
        assert!(m.zoomin().is_empty());
        assert!(m.validate().is_valid());
    }

    #[test]
    fn fnode_limit() {
        let g = fixtures::figure1_grammar();
        let toks: Vec<String> = ["a", "girl", "walks"].map(String::from).to_vec();
        let mut chart = Chart::new(&g, &toks);
        let d = chart.derivations("S", 9).remove(0);
        assert_eq!(solve(&g, &build_tree(&g, &d), 8), Err(Conflict::TooLarge(9)));
    }
}
