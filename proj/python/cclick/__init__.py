"""Click models for carousel recommender interfaces."""

from ._core import (  # noqa: F401
    CarouselLayout,
    Dataset,
    FitConfig,
    FitResult,
    Model,
    SplitSpec,
    __version__,
    carousel_prior,
    click_log_likelihood,
    clip,
    dummy_baseline,
    filter_impressions,
    filter_sessions,
    fit,
    load_interactions,
    make_dataset,
    make_model,
    mle_attraction,
    mle_examination,
    observed_examination_log_likelihood,
    run_experiment_config,
    run_split_pipeline,
    simulate,
    train_test_split,
    train_validation_split,
    write_interactions,
)
