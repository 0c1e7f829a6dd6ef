//! Random signatures, valid models and formulas.

use std::collections::BTreeMap;

use lfgmc_core::model::{CStructure, FNode, FNodeId, FStructure, Label, Model, Signature, TreeId, TreeNode};
use lfgmc_core::{Formula, PathTerm, TreeStep};
use rand::seq::SliceRandom;
use rand::Rng;

/// The signature random models and formulas are drawn over.
pub fn signature() -> Signature {
    Signature::new(["S", "NP", "VP", "X"], ["p", "q", "r"], ["f", "g", "h"])
        .with_words(["u", "v", "w"])
        .with_gf([vec!["f"], vec!["g", "h"]])
}

fn pick<'a, R: Rng>(rng: &mut R, items: &'a std::collections::BTreeSet<String>) -> &'a String {
    let i = rng.gen_range(0..items.len());
    items.iter().nth(i).expect("in range")
}

/// A model satisfying every structural invariant, with at most
/// `max_tree` tree nodes and `max_f` f-nodes and shuffled ids.
pub fn model<R: Rng>(rng: &mut R, sig: &Signature, max_tree: usize, max_f: usize) -> Model {
    let nt = rng.gen_range(1..=max_tree);
    let mut mothers: Vec<Option<usize>> = vec![None];
    for k in 1..nt {
        mothers.push(Some(rng.gen_range(0..k)));
    }
    let mut tids: Vec<u32> = (0..nt as u32).collect();
    tids.shuffle(rng);
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); nt];
    for (k, m) in mothers.iter().enumerate() {
        if let Some(m) = m {
            kids[*m].push(k);
        }
    }
    let mut nodes = BTreeMap::new();
    for k in 0..nt {
        let label = if kids[k].is_empty() && rng.gen_bool(0.5) {
            Label::Word(pick(rng, sig.words()).clone())
        } else {
            Label::Cat(pick(rng, sig.cats()).clone())
        };
        nodes.insert(
            TreeId(tids[k]),
            TreeNode {
                label,
                mother: mothers[k].map(|m| TreeId(tids[m])),
                daughters: kids[k].iter().map(|d| TreeId(tids[*d])).collect(),
            },
        );
    }
    let cstruct = CStructure::from_parts(TreeId(tids[0]), nodes);

    let nf = rng.gen_range(1..=max_f);
    let feats: Vec<&String> = sig.feats().iter().collect();
    let mut trans: Vec<BTreeMap<String, usize>> = vec![BTreeMap::new(); nf];
    for k in 1..nf {
        // an edge from an earlier node keeps the graph acyclic and reachable
        let sources: Vec<usize> = (0..k).filter(|s| trans[*s].len() < feats.len()).collect();
        let s = *sources.choose(rng).expect("node k-1 has no edges yet");
        let free: Vec<&&String> = feats.iter().filter(|f| !trans[s].contains_key(f.as_str())).collect();
        trans[s].insert((*free.choose(rng).expect("free feature")).to_string(), k);
    }
    #[allow(clippy::needless_range_loop)]
    for s in 0..nf {
        for t in s + 1..nf {
            if rng.gen_bool(0.15) {
                let free: Vec<&&String> = feats.iter().filter(|f| !trans[s].contains_key(f.as_str())).collect();
                if let Some(f) = free.choose(rng) {
                    trans[s].insert(f.to_string(), t);
                }
            }
        }
    }
    let mut fids: Vec<u32> = (0..nf as u32).collect();
    fids.shuffle(rng);
    let mut fnodes = BTreeMap::new();
    for k in 0..nf {
        let atom = if trans[k].is_empty() && rng.gen_bool(0.6) { Some(pick(rng, sig.atoms()).clone()) } else { None };
        fnodes.insert(
            FNodeId(fids[k]),
            FNode { trans: trans[k].iter().map(|(f, t)| (f.clone(), FNodeId(fids[*t]))).collect(), atom },
        );
    }
    let fstruct = FStructure::from_nodes(FNodeId(fids[0]), fnodes);

    let mut zoomin = BTreeMap::new();
    for t in cstruct.ids() {
        if rng.gen_bool(0.5) {
            zoomin.insert(t, FNodeId(fids[rng.gen_range(0..nf)]));
        }
    }
    Model::new(sig.clone(), cstruct, fstruct, zoomin)
}

fn path_term<R: Rng>(rng: &mut R, sig: &Signature) -> PathTerm {
    let tree = (0..rng.gen_range(0..=2))
        .map(|_| if rng.gen_bool(0.5) { TreeStep::Up } else { TreeStep::Down })
        .collect::<Vec<_>>();
    let feats = (0..rng.gen_range(0..=2)).map(|_| pick(rng, sig.feats()).clone()).collect::<Vec<_>>();
    PathTerm::new(tree, feats)
}

fn leaf<R: Rng>(rng: &mut R, sig: &Signature) -> Formula {
    match rng.gen_range(0..8) {
        0 => Formula::True,
        1 => Formula::False,
        2 => Formula::CStruct,
        3 => Formula::FStruct,
        4 => Formula::cat(pick(rng, sig.cats())),
        5 => Formula::atom(pick(rng, sig.atoms())),
        6 => Formula::word(pick(rng, sig.words())),
        _ => Formula::path_eq(path_term(rng, sig), path_term(rng, sig)),
    }
}

/// A formula of depth at most `depth` over `sig`.
pub fn formula<R: Rng>(rng: &mut R, sig: &Signature, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng, sig);
    }
    let d = depth - 1;
    let sub = |rng: &mut R| formula(rng, sig, d);
    match rng.gen_range(0..10) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::iff(sub(rng), sub(rng)),
        5 => Formula::feat(pick(rng, sig.feats()).clone(), sub(rng)),
        6 => Formula::up(sub(rng)),
        7 => Formula::down(sub(rng)),
        8 => Formula::zoomin(sub(rng)),
        _ => {
            let k = rng.gen_range(1..=3);
            Formula::bullet((0..k).map(|_| sub(rng)).collect()).expect("nonempty")
        }
    }
}

/// `m` with tree and f-node ids permuted at random; isomorphic to `m`.
pub fn relabel<R: Rng>(rng: &mut R, m: &Model) -> Model {
    let (sig, cs, fs, zoomin) = m.clone().into_parts();
    let (root, tnodes) = cs.into_parts();
    let (initial, fnodes, finals) = fs.into_parts();
    let mut tperm: Vec<u32> = (0..tnodes.len() as u32).map(|i| i * 3 + 1).collect();
    tperm.shuffle(rng);
    let tmap: BTreeMap<TreeId, TreeId> = tnodes.keys().zip(tperm).map(|(k, v)| (*k, TreeId(v))).collect();
    let mut fperm: Vec<u32> = (0..fnodes.len() as u32).map(|i| i * 2 + 5).collect();
    fperm.shuffle(rng);
    let fmap: BTreeMap<FNodeId, FNodeId> = fnodes.keys().zip(fperm).map(|(k, v)| (*k, FNodeId(v))).collect();
    let tnodes = tnodes
        .into_iter()
        .map(|(k, n)| {
            (
                tmap[&k],
                TreeNode {
                    label: n.label,
                    mother: n.mother.map(|x| tmap[&x]),
                    daughters: n.daughters.iter().map(|d| tmap[d]).collect(),
                },
            )
        })
        .collect();
    let fnodes = fnodes
        .into_iter()
        .map(|(k, n)| {
            (fmap[&k], FNode { trans: n.trans.into_iter().map(|(f, v)| (f, fmap[&v])).collect(), atom: n.atom })
        })
        .collect();
    Model::new(
        sig,
        CStructure::from_parts(tmap[&root], tnodes),
        FStructure::from_parts(fmap[&initial], fnodes, finals.iter().map(|w| fmap[w]).collect()),
        zoomin.into_iter().map(|(t, w)| (tmap[&t], fmap[&w])).collect(),
    )
}
