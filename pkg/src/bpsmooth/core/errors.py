class BpSmoothError(Exception):
    """
    Базовая ошибка пакета
    """


class InstanceFormatError(BpSmoothError, ValueError):
    """
    Строка файла экземпляра не соответствует формату
    """
    def __init__(self, line_no: int, message: str):
        super().__init__(f'line {line_no}: {message}')
        self.line_no = line_no


class InstanceValidationError(BpSmoothError, ValueError):
    pass


class InstanceShapeError(BpSmoothError, ValueError):
    pass


class FamilyParameterError(BpSmoothError, ValueError):
    pass


class TreeSizeError(BpSmoothError):
    pass


class EnumerationCapError(BpSmoothError):
    pass


class InfeasibleFlowError(BpSmoothError):
    pass


class NegativeCycleError(BpSmoothError):
    pass


class SurvivalEstimationError(BpSmoothError, ValueError):
    pass


class TailFitError(BpSmoothError):
    pass


class ExperimentConfigError(BpSmoothError, ValueError):
    pass
