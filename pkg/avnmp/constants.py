# environment variable overriding the scenario seed
SEED_ENV_VAR = "AVNMP_SEED"

# scenario defaults
DEFAULT_SEED = 23
DEFAULT_GVT_EVERY = 64
DEFAULT_CAPACITY = 5
DEFAULT_DELTA = 10
DEFAULT_ALPHA = 0.5

# source identifier carried by driving-process streptichrons
DRIVER_ID = "driver"

# numpy seed-sequence stream tags
NOISE_STREAM = 0
TRUTH_STREAM = 1

# report layout
CSV_COLUMNS = ["tick", "real_now", "min_lvt", "gvt", "lookahead", "rollbacks_cum"]
ERROR_COLUMN_PREFIX = "err_"
ORACLE_COLUMNS = ["node", "tick", "queue_len", "processed", "inst_load"]
REPORT_FORMATS = ["csv", "json"]

# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_IO_ERROR = 2
