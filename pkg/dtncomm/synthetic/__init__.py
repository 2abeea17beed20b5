from dtncomm.synthetic.networks import (
    SyntheticModel,
    SyntheticSpec,
    barabasi_albert,
    generate,
    generate_many,
    synthetic_node_ids,
    watts_strogatz,
)
from dtncomm.synthetic.traces import (
    poisson_contact_trace,
    synthetic_intervals,
    synthetic_session_log,
)
