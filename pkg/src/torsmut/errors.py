class TorsmutError(Exception):
    """Base class for all errors raised by torsmut."""


class InconsistentSystem(TorsmutError):
    pass


class CapExceeded(TorsmutError):
    pass


class NotFiniteDimensional(TorsmutError):
    pass


class MalformedRelation(TorsmutError):
    pass


class BoundExceeded(TorsmutError):
    pass


class AmbientIncomplete(TorsmutError):
    pass


class NotNested(TorsmutError):
    pass


class NotACover(TorsmutError):
    pass


class NotSilting(TorsmutError):
    pass


class MutationOutOfRange(TorsmutError):
    pass
