# target groups of the hate speech corpus the benchmark imitates
MHS_GROUPS = ["Asian", "Black", "Latinx", "Middle Eastern", "Native American", "Pacific Islander", "White"]

# per-group positive rates of the skewed synthetic benchmark, Black is the statistical majority
BENCHMARK_BASE_RATES = [0.30, 0.45, 0.25, 0.15, 0.05, 0.05, 0.20]

# hidden widths of the classification head
DESK_HIDDEN_SIZES = (64, 32, 16)
FULL_HIDDEN_SIZES = (512, 128, 64)

# environment variables
NUM_THREADS_ENV = "FTD_NUM_THREADS"
RUN_BENCHMARK_ENV = "FTD_RUN_BENCHMARK"

# where the CLI writes when --out is omitted
RESULTS_DIR = "results"
