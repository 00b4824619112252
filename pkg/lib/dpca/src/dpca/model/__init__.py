"""Component model parameters, component trees and model files."""

from .component_model import (
    ComponentModel,
    InitConfig,
    Variant,
    init_model,
    node_word_average,
    smoothed_unigram,
)
from .likelihood import (
    complete_data_log_likelihood,
    document_log_likelihood,
    document_log_likelihoods,
)
from .navigator import TreeNavigator
from .persistence import MODEL_FORMAT, load_model, model_from_dict, model_to_dict, save_model
from .tree import (
    LOWER_PRIOR,
    ROOT_PRIOR,
    TopicTree,
    TreeNode,
    build_tree,
    invert_proportions_to_tree,
    map_tree_to_proportions,
    parse_tree_spec,
    tree_node_count,
)

__all__ = [
    # Parameters
    "ComponentModel",
    "Variant",
    "InitConfig",
    "init_model",
    "smoothed_unigram",
    "node_word_average",
    # Likelihood
    "document_log_likelihood",
    "document_log_likelihoods",
    "complete_data_log_likelihood",
    # Trees
    "TopicTree",
    "TreeNode",
    "TreeNavigator",
    "build_tree",
    "parse_tree_spec",
    "tree_node_count",
    "map_tree_to_proportions",
    "invert_proportions_to_tree",
    "ROOT_PRIOR",
    "LOWER_PRIOR",
    # Files
    "MODEL_FORMAT",
    "save_model",
    "load_model",
    "model_to_dict",
    "model_from_dict",
]
