"""Keyword search over XML with SLCA/ELCA semantics.

Two index layouts are provided: a baseline per-keyword inverted index
over the document tree, and a compressed layout in which repeated
subtrees are merged so each redundancy component is indexed and searched
once. All search variants return the same ascending node-ID result sets.
"""

from .base_search import (
    CursorSet,
    bwd_elca,
    bwd_slca,
    bwd_slca_plus,
    count_ca,
    fwd_elca,
    fwd_get_ca,
    fwd_slca,
)
from .bench import (
    BenchMismatchError,
    QueryCategory,
    bench_query,
    classify_query,
    load_queries,
    run_bench,
)
from .corpus import CorpusInfo, generate_corpus, scale_corpus
from .dag_builder import (
    CompressedDag,
    DagNode,
    IDCluster,
    RedundancyComponent,
    SavingsStats,
    build_idcluster,
    compress,
    savings_report,
    unfold,
)
from .dag_search import (
    dag_bwd_elca,
    dag_bwd_slca,
    dag_bwd_slca_plus,
    dag_fwd_elca,
    dag_fwd_slca,
)
from .doc_model import (
    DocumentTree,
    DocumentTooLarge,
    Node,
    ParseError,
    build_tree,
    parse_document,
    parse_path,
    tokenize,
)
from .index_store import (
    CorruptIndexError,
    IndexStoreError,
    VersionMismatchError,
    load,
    save,
)
from .oracle import ca_oracle, containment_oracle, elca_oracle, slca_oracle
from .tree_index import IDList, TreeIndex, build_tree_index, idlist_lookup

__version__ = "0.1.0"
