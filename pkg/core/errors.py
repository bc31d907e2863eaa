# core/errors.py


class FDTCEngineError(Exception):
    """Racine de toutes les erreurs du moteur."""


class SurfaceError(FDTCEngineError):
    pass


class CurveError(FDTCEngineError):
    pass


class MappingClassError(FDTCEngineError):
    pass


class FDTCError(FDTCEngineError):
    pass


class FoliationError(FDTCEngineError):
    pass


class TopologyError(FDTCEngineError):
    pass


class ProblemError(FDTCEngineError):
    """Erreur de lecture ou de résolution d'un fichier problème."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
