"""Exception hierarchy.

Validation-type failures and I/O/parse-type failures are kept on separate
branches so the CLI can map them to stable exit codes (1 and 2).
"""


class CanonhandError(Exception):
    """Base class for all package errors."""


class ValidationError(CanonhandError):
    """Bad inputs: parameters, annotations, vectors, variant ids."""


class InputError(CanonhandError):
    """Bad files: XML, meshes, datasets, unresolved references."""


# -- validation branch --------------------------------------------------------

class InvalidParams(ValidationError):
    pass


class InvalidVariant(ValidationError):
    pass


class InvalidRanges(ValidationError):
    pass


class BadLength(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class MissingChain(ValidationError):
    pass


class DegenerateFrame(ValidationError):
    pass


class AmbiguousPalm(ValidationError):
    pass


class NoPalmFound(ValidationError):
    pass


class UnknownLink(ValidationError):
    pass


class UnknownJointName(ValidationError):
    pass


class EmptyGeometry(ValidationError):
    pass


# -- input branch --------------------------------------------------------------

class MalformedXml(InputError):
    pass


class MultipleRoots(InputError):
    pass


class CycleDetected(InputError):
    pass


class UnresolvedLinkRef(InputError):
    pass


class UnsupportedFormat(InputError):
    pass


class CorruptMesh(InputError):
    pass


class MeshNotFound(InputError):
    pass


class IoError(InputError):
    pass
