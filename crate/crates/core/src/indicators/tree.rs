use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::refactoring::RefactoringAction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    /// `None` only for the root.
    pub action: Option<RefactoringAction>,
    pub depth: usize,
    pub children: BTreeMap<RefactoringAction, usize>,
    /// Number of recorded sequences ending here.
    pub weight: usize,
}

/// Prefix trie of refactoring sequences. A node is identified by the whole
/// action path leading to it; ids of generated elements are already a pure
/// function of that path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceTree {
    pub nodes: Vec<TreeNode>,
}

impl Default for SequenceTree {
    fn default() -> Self {
        Self {
            nodes: vec![TreeNode {
                action: None,
                depth: 0,
                children: BTreeMap::new(),
                weight: 0,
            }],
        }
    }
}

impl SequenceTree {
    pub fn from_sequences<'a, I>(sequences: I) -> Self
    where
        I: IntoIterator<Item = &'a [RefactoringAction]>,
    {
        let mut t = Self::default();
        for s in sequences {
            t.insert(s);
        }
        t
    }

    pub fn insert(&mut self, sequence: &[RefactoringAction]) {
        let mut at = 0;
        for action in sequence {
            at = match self.nodes[at].children.get(action) {
                Some(&next) => next,
                None => {
                    let id = self.nodes.len();
                    let depth = self.nodes[at].depth + 1;
                    self.nodes.push(TreeNode {
                        action: Some(action.clone()),
                        depth,
                        children: BTreeMap::new(),
                        weight: 0,
                    });
                    self.nodes[at].children.insert(action.clone(), id);
                    id
                }
            };
        }
        self.nodes[at].weight += 1;
    }

    /// Nodes excluding the root.
    pub fn size(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn leaves(&self) -> usize {
        self.nodes.iter().skip(1).filter(|n| n.children.is_empty()).count()
    }
}

/// Share of the nodes of `reference` that also appear in `tree`.
pub fn tree_coverage(tree: &SequenceTree, reference: &SequenceTree) -> f64 {
    if reference.size() == 0 {
        return 0.0;
    }
    let mut shared = 0usize;
    let mut stack = vec![(0usize, 0usize)];
    while let Some((r, t)) = stack.pop() {
        for (action, &rc) in &reference.nodes[r].children {
            if let Some(&tc) = tree.nodes[t].children.get(action) {
                shared += 1;
                stack.push((rc, tc));
            }
        }
    }
    shared as f64 / reference.size() as f64
}
