import os

from dotenv import load_dotenv

load_dotenv()

# Safety cap for every order parameter (series terms, pole orders, bi-orders)
MAX_ORDER = int(os.getenv("VVMF_MAX_ORDER", "400"))

# Defaults used by the CLI when no flag is given
DEFAULT_ORDER = int(os.getenv("VVMF_DEFAULT_ORDER", "10"))
DEFAULT_MAX_POLE = int(os.getenv("VVMF_DEFAULT_MAX_POLE", "4"))

LOG_LEVEL = os.getenv("VVMF_LOG_LEVEL", "WARNING")

# Prometheus textfile written after each CLI run when set
METRICS_FILE = os.getenv("VVMF_METRICS_FILE")

# Bit cap for interval refinement when deciding the sign of a real cyclotomic number
SIGN_MAX_PRECISION = int(os.getenv("VVMF_SIGN_MAX_PRECISION", "4096"))
