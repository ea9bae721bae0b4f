class RadioError(Exception):
    """Base class for frontend-level failures."""


class UnknownRadioError(RadioError):
    pass


class ConfigError(RadioError):
    pass


class OversizePayloadError(RadioError):
    pass


class RegisterRangeError(RadioError):
    pass
