"""Oblivious streaming sketches and coreset baselines for logistic regression.

Build a small weighted summary of a huge signed data matrix under arbitrary
turnstile updates, then fit logistic regression on the summary instead of the
data. The summary combines multilevel hash buckets (which preserve the heavy,
expensive-to-misclassify rows) with a uniform row sample (which covers the
well-classified mass).
"""

from .backend import BACKEND, kernel_backends
from .baselines import (CoresetSample, l2s_coreset, leverage_scores_l2,
                        sgd_one_pass, uniform_coreset)
from .data_model import (LabeledDataset, TurnstileUpdate, WeightedDataset,
                         accumulate_updates, read_turnstile,
                         signed_design_matrix, to_update_stream,
                         write_turnstile)
from .datasets import (DatasetSpec, ResultRecord, add_noise, gen_clouds,
                       gen_synthetic, read_csv_dataset, read_libsvm,
                       read_results_csv, summarize_records, write_csv_dataset,
                       write_libsvm, write_results_csv, write_summary_csv)
from .experiment import (ExperimentPlan, approximation_ratio, cell_seed,
                         parse_plan, run_experiment)
from .objectives import (ClipSpec, MuEstimate, clipped_weighted_loss,
                         clipped_weighted_subgrad, gplus, gplus_clipped,
                         logistic_grad, logistic_loss, min_loss_lower_bound,
                         mu_lower_bound, split_bounds, stable_logistic,
                         weighted_logistic_loss, weighted_loss_at)
from .sketch import (SketchConfig, SketchState, SketchedDataset,
                     ValidationReport, bucket_of, config_for_size,
                     default_branch, derive_beta, finalize, init_sketch,
                     level_of, make_config, merge_states, read_sketch_csv,
                     sketch_matrix, validate_theory_params, write_sketch_csv)
from .solver import (SolveOptions, SolveResult, SolverError, minimize_clipped,
                     minimize_full, minimize_weighted)

__version__ = "0.1.0"
