"""Marketplace seller fraud detection toolkit.

A from-scratch soft-margin SVM (SMO trainer, kernels, margin geometry, and a
brute-force dual reference solver) embedded in a full detection pipeline:
seller-history features, min-max scaling, a weighted rules engine, reputation
matching, expert-input fusion, and an action policy, all wired together by a
deterministic CLI.
"""

from .detection import (
    ExpertInput,
    ExpertInputStore,
    FraudDetector,
    FraudVerdict,
    FusionPolicy,
    ReputationRecord,
    SignalBundle,
    Verdict,
    fuse,
    reputation_match,
)
from .exceptions import (
    ConfigurationError,
    ConvergenceError,
    DatasetFormatError,
    DatasetValidationError,
    DegenerateLabelsError,
    DegenerateModelError,
    InvalidInputError,
    ManifestMismatchError,
    MarketGuardError,
    NotFoundError,
    OracleError,
    SizeLimitError,
    TrainingError,
    UnsupportedOperationError,
)
from .dataset_io import load_histories, load_labeled, save_histories, save_labeled
from .features import (
    FEATURE_NAMES,
    FeatureScaler,
    FeatureVector,
    extract,
    feature_manifest,
    feature_matrix,
    fit_scaling,
    scale_vector,
)
from .kernels import Kernel, LinearKernel, PolynomialKernel, RBFKernel, resolve_kernel
from .management import Action, ActionDecision, PolicyConfig, decide_action
from .model import ModelBundle, SvmModel, TrainConfig, kkt_violation, load_model, save_model
from .qp import DualSolution, solve_dual_qp
from .records import (
    Complaint,
    LabeledSeller,
    Listing,
    Order,
    Return,
    SellerHistory,
    SellerProfile,
    SocialSignal,
    ValidationReport,
    validate_history,
)
from .rules import Rule, RuleOutcome, RuleSet, default_ruleset, evaluate_rules, load_ruleset
from .smo import SMOClassifier
from .synthetic import EffectSizes, GeneratorConfig, generate_synthetic

__version__ = "0.1.0"
