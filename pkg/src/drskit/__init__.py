"""Toolkit for clausal-form meaning representations.

Parsing and serialization (clausal), semantic validation (checker),
clause-level F-scoring with variable matching (matcher), variable renaming
and token codecs (transforms), baselines and corpus analysis (corpus), and
a command-line interface (cli).
"""

from .clausal import (Clause, ClausalError, ClausalForm, Constant, Kind,
                      MalformedClause, OperatorTables, UnclassifiableToken,
                      Variable, classify_token, parse_clause, parse_corpus,
                      serialize, serialize_corpus)
from .checker import (AccessibilityGraph, CheckReport, Reason,
                      RequiresValidForm, TypeClash, VarType,
                      build_accessibility, check, check_text, induce_types,
                      is_well_formed_syntax, require_valid)
from .matcher import (CategoryFilter, InvalidGold, LengthBucket,
                      LengthMismatch, MatchResult, SignificanceResult,
                      clause_match, fscore, load_synsets, score_by_length,
                      score_category, score_corpus, score_pair, significance)
from .transforms import (Casing, Level, NamingScheme, TokenSeq,
                         UnresolvableOffset, apply_scheme, decode_input,
                         decode_output, encode_input, encode_output,
                         rename_absolute, rename_relative, restore_relative)
from .corpus import (APPROXIMATE, CorpusStats, DEFAULT_ANAPHORIC,
                     DimensionMismatch, EmbeddingStore, EmptyFile,
                     EmptyTrainingSet, Phenomenon, PhenomenonAbsentInGold,
                     corpus_stats, cosine, default_spar_form,
                     detect_phenomena, judge_phenomenon, load_embeddings,
                     load_stopwords, sim_spar, spar)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
