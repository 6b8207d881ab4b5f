from typing import Any, Dict, List, Optional


class Manifest:
    """Provenance record written next to every run's outputs."""

    def __init__(
        self,
        command: str,
        config_hash: str,
        versions: Dict[str, str],
        files: Optional[Dict[str, str]] = None,
        failures: Optional[List[Dict[str, Any]]] = None,
    ):
        self.command = command
        self.config_hash = config_hash
        self.versions = versions
        self.files = files or {}  # relative path -> sha256
        self.failures = failures or []

    def record(self, name: str, checksum: str) -> None:
        self.files[name] = checksum

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "config_sha256": self.config_hash,
            "versions": dict(sorted(self.versions.items())),
            "files": dict(sorted(self.files.items())),
            "failures": self.failures,
        }
