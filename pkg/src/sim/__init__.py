"""
Sim package initialization.
Contains the Monte Carlo samplers, the batch driver and dataset I/O.
"""
from .driver import SampleRequest, simulate_sample
from .io import read_dataset_csv, write_dataset_csv, write_tree_csv
from .records import BranchTree, DecayDataset, ObserverRecord, SamplerTag
from .samplers import (
    observe_tree,
    sample_branch_tree,
    sample_observer_direct,
    sample_observer_mechanistic,
)
from .streams import BLOCK_SIZE, RandomStream, derive_seed, observer_stream, tree_stream
from .summaries import branch_class_counts, branch_class_summary, empirical_survival

__all__ = [
    'BLOCK_SIZE',
    'BranchTree',
    'DecayDataset',
    'ObserverRecord',
    'RandomStream',
    'SampleRequest',
    'SamplerTag',
    'branch_class_counts',
    'branch_class_summary',
    'derive_seed',
    'empirical_survival',
    'observe_tree',
    'observer_stream',
    'read_dataset_csv',
    'sample_branch_tree',
    'sample_observer_direct',
    'sample_observer_mechanistic',
    'simulate_sample',
    'tree_stream',
    'write_dataset_csv',
    'write_tree_csv',
]
