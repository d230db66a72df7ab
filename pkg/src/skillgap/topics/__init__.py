"""Unsupervised skill topics: LDA, NPMI coherence, K selection and fold-in."""
from .annotate import annotate, read_labels
from .coherence import CoherenceReport, npmi, npmi_coherence
from .inference import infer_corpus, infer_theta, topic_document_frequency
from .lda import TopicLabel, TopicModel, default_alpha, random_model, top_words, train_lda
from .select import SweepResult, select_k
from .serialize import load_model, save_model
from .vocabulary import Vocabulary, build_vocabulary, stopwords

__all__ = [
    "CoherenceReport",
    "SweepResult",
    "TopicLabel",
    "TopicModel",
    "Vocabulary",
    "annotate",
    "build_vocabulary",
    "default_alpha",
    "infer_corpus",
    "infer_theta",
    "load_model",
    "npmi",
    "npmi_coherence",
    "random_model",
    "read_labels",
    "save_model",
    "select_k",
    "stopwords",
    "top_words",
    "topic_document_frequency",
    "train_lda",
]
