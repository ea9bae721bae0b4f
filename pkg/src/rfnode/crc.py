import binascii


def crc16_ccitt(data: bytes) -> int:
    return binascii.crc_hqx(data, 0xFFFF)


def crc16_bytes(data: bytes) -> bytes:
    """CRC over data, appended little-endian on the air."""
    return crc16_ccitt(data).to_bytes(2, "little")
