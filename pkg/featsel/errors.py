class FeatselError(Exception):
    """Base class of every error raised by featsel."""


class DataError(FeatselError, ValueError):
    # row is the 1-based line number in the file (the header is line 1) and column is the
    # header name of the offending cell, when they are known.
    def __init__(self, message, row=None, column=None):
        if row is not None and column is not None:
            message = "row {}, column {!r}: {}".format(row, column, message)
        elif row is not None:
            message = "row {}: {}".format(row, message)
        FeatselError.__init__(self, message)
        self.row = row
        self.column = column
    

class ValidationError(FeatselError, ValueError):
    pass

class DomainError(ValidationError):
    pass

class FeasibilityError(FeatselError):
    def __init__(self, message, bound=None):
        if bound is not None:
            message = "{} (max_features bound: {})".format(message, bound)
        FeatselError.__init__(self, message)
        self.bound = bound
    

class SingularityError(FeatselError):
    def __init__(self, message, which=None):
        FeatselError.__init__(self, message)
        self.which = which
    

class SelectionError(FeatselError):
    pass

class ConfigError(FeatselError):
    pass

class UsageError(ConfigError):
    pass

class ReportError(FeatselError):
    def __init__(self, message, path=None):
        if path is not None:
            message = "{}: {}".format(path, message)
        FeatselError.__init__(self, message)
        self.path = path
    

class PipelineError(FeatselError):
    def __init__(self, stage, error):
        FeatselError.__init__(self, "[{}] {}".format(stage, error))
        self.stage = stage
        self.error = error
    
