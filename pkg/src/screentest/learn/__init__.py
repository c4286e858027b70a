from screentest.learn.baselines import knn_predict, majority_predict
from screentest.learn.infogain import FeatureRanking, info_gain, info_gain_rank
from screentest.learn.kstar import (
    DEFAULT_BLEND,
    KStarModel,
    kstar_predict,
    kstar_train,
    load_model,
    save_model,
)
from screentest.learn.validation import (
    cross_validate,
    grid_search_blend,
    kstar_spec,
    knn_spec,
    majority_spec,
    stratified_folds,
)

__all__ = [
    "DEFAULT_BLEND",
    "FeatureRanking",
    "KStarModel",
    "cross_validate",
    "grid_search_blend",
    "info_gain",
    "info_gain_rank",
    "knn_predict",
    "knn_spec",
    "kstar_predict",
    "kstar_spec",
    "kstar_train",
    "load_model",
    "majority_predict",
    "majority_spec",
    "save_model",
    "stratified_folds",
]
