"""
Exceptions to be raised by the hyperparameter optimization helpers
"""


class HpoError(Exception):
    """
    Base Exception class - catching this will catch other exceptions raised
    while loading data, building search spaces, training or tuning.
    """


class InvalidArgumentError(HpoError, ValueError):
    """
    Exception class to be raised if an operation receives an argument outside
    its permitted range - for example a zero grid resolution, a sampling rate
    above 1 or an empty list of fold scores.
    """


class SpaceDefinitionError(HpoError):
    """
    Exception class to be raised if a distribution or search space definition
    is invalid.  Messages name the offending dimension and field when known.
    """


class DataLoadError(HpoError):
    """
    Generic data loading error.  Simplifies exception catching in calling
    functions / scripts - the more specific subclasses below are raised with
    a useful message to indicate why the dataset can't be used.
    """


class EmptyDataError(DataLoadError):
    """
    Exception class to be raised if a CSV file has no data rows.
    """


class MissingTargetError(DataLoadError):
    """
    Exception class to be raised if the declared target column is not present
    in the CSV header.
    """


class UnparseableCellError(DataLoadError):
    """
    Exception class to be raised if a numeric column contains a value that is
    neither a number nor one of the declared missing tokens.
    """


class SingleClassError(DataLoadError):
    """
    Exception class to be raised if the labels (of a file, a training subset
    or a sample) contain only one class.
    """


class StratificationError(HpoError):
    """
    Exception class to be raised if a stratified split or sample is not
    feasible, e.g. a class has fewer members than the requested fold count.
    """


class MetricError(HpoError):
    """
    Base class for scoring errors.
    """


class UndefinedAucError(MetricError):
    """
    Exception class to be raised if ROC AUC is requested for single-class
    labels.
    """


class LearnerError(HpoError):
    """
    Exception class to be raised if the boosted tree learner can't be trained
    or applied.
    """


class FeatureCountMismatchError(LearnerError):
    """
    Exception class to be raised if a model is applied to a dataset with a
    different number of features than it was trained on.
    """


class BenchConfigError(HpoError):
    """
    Exception class to be raised if a benchmark configuration fails
    validation.
    """
