//! JSON trees: `{"var": i, "left": …, "right": …}` for queries (`left` on
//! 1), `{"bit": b}` for leaves and `{"forest": [...]}` for forest leaves.

use ismr_core::classical::dtree::{DecisionForest, DecisionTree, ForestTree};
use serde::{Deserialize, Serialize};

use crate::{param, LabResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeJson {
    Leaf { bit: u8 },
    Forest { forest: Vec<TreeJson> },
    Node { var: usize, left: Box<TreeJson>, right: Box<TreeJson> },
}

impl TreeJson {
    pub fn to_tree(&self) -> LabResult<DecisionTree> {
        match self {
            TreeJson::Leaf { bit } if *bit <= 1 => Ok(DecisionTree::leaf(*bit == 1)),
            TreeJson::Leaf { bit } => Err(param("tree", format!("leaf bit {bit} is not 0 or 1"))),
            TreeJson::Forest { .. } => Err(param("tree", "forest leaf inside a plain tree")),
            TreeJson::Node { var, left, right } => Ok(DecisionTree::node(*var, left.to_tree()?, right.to_tree()?)),
        }
    }

    pub fn from_tree(t: &DecisionTree) -> Self {
        match t {
            DecisionTree::Leaf(b) => TreeJson::Leaf { bit: *b as u8 },
            DecisionTree::Node { var, left, right } => TreeJson::Node {
                var: *var,
                left: Box::new(TreeJson::from_tree(left)),
                right: Box::new(TreeJson::from_tree(right)),
            },
        }
    }

    pub fn to_forest(&self) -> LabResult<DecisionForest> {
        fn go(t: &TreeJson) -> LabResult<ForestTree> {
            match t {
                TreeJson::Forest { forest } => {
                    Ok(ForestTree::Leaf(forest.iter().map(|l| l.to_tree()).collect::<LabResult<_>>()?))
                }
                TreeJson::Node { var, left, right } => Ok(ForestTree::Node {
                    var: *var,
                    left: Box::new(go(left)?),
                    right: Box::new(go(right)?),
                }),
                TreeJson::Leaf { .. } => Err(param("tree", "forest query tree must end in forest leaves")),
            }
        }
        Ok(DecisionForest { root: go(self)? })
    }
}

pub fn parse_tree(text: &str) -> LabResult<DecisionTree> {
    let t: TreeJson = serde_json::from_str(text)?;
    let tree = t.to_tree()?;
    tree.validate()?;
    Ok(tree)
}
