import configparser
import logging
import os

SECTION = "Settings"


class ConfigManager:
    def __init__(self, config_file, default_settings):
        self.config_file = config_file
        self.default_settings = default_settings

    def _read(self):
        config = configparser.ConfigParser()
        if os.path.exists(self.config_file):
            config.read(self.config_file)
        return config

    def load_setting(self, key, default=None):
        if default is None:
            default = self.default_settings.get(key)
        return self._read().get(SECTION, key, fallback=default)

    def load_int(self, key, default=None):
        value = self.load_setting(key, default)
        try:
            return int(value)
        except (TypeError, ValueError):
            fallback = int(self.default_settings.get(key, 0))
            logging.warning(f"setting {key}={value!r} is not an integer, using {fallback}")
            return fallback

    def load_bool(self, key, default=None):
        value = str(self.load_setting(key, default)).strip().lower()
        if value in ("1", "true", "yes", "on"):
            return True
        if value in ("0", "false", "no", "off", "none", ""):
            return False
        logging.warning(f"setting {key}={value!r} is not a boolean, using False")
        return False

    def initialize_settings(self):
        """Create the settings file with defaults, or add keys missing from it"""
        config_dir = os.path.dirname(self.config_file)
        if config_dir:
            os.makedirs(config_dir, exist_ok=True)

        config = self._read()
        created = not os.path.exists(self.config_file)
        if SECTION not in config:
            config[SECTION] = {}

        updated = False
        for key, value in self.default_settings.items():
            if key not in config[SECTION]:
                config[SECTION][key] = str(value)
                updated = True

        if updated:
            with open(self.config_file, "w") as f:
                config.write(f)
            if created:
                logging.info(f"created settings file {self.config_file}")
        return updated
