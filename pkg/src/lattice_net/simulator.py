"""Cycle-driven flit-level network simulator for lattice graphs.

Model: virtual cut-through switching with bubble deadlock avoidance over
dimension-order routing.  Each node owns 2n outgoing links (one phit per
link per direction per cycle), per-incoming-link buffers split into
virtual channels holding whole packets, and a bank of FIFO injector
queues.  A packet's route is a minimal routing record drawn uniformly
among the minimal set at injection time; dimensions are then consumed in
ascending order.

Advance rules, applied at link arbitration:
  - in-transit packets beat injections; ties within a class are broken
    uniformly at random from the run's seeded generator;
  - a move entering a ring (injection, or first hop in a new dimension)
    needs two free packet slots in the chosen downstream VC (the bubble)
    and picks the least-occupied eligible VC; a move continuing in its
    dimension keeps its VC and needs one free slot;
  - the final hop ejects: consumption is unbounded, so it needs only the
    link.

Timing: a hop granted at cycle t holds the link for `packet_size` cycles;
the head phit is available downstream from t + 1 (one cycle per hop), the
upstream buffer slot frees once the tail leaves at t + size, and delivery
completes at t + size - 1.  Packets created at cycle t arbitrate from
t + 1, so zero-conflict latency is norm + size.

Grants within one cycle are resolved sequentially over links in index
order, which keeps every run bit-for-bit deterministic for a fixed
(config, seed).
"""

import os
import random
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

from lattice_net import lattice, routing
from lattice_net.errors import ConfigError, LatticeError

MAX_SIM_ORDER = 16384

PATTERNS = ("uniform", "antipodal", "centralsymmetric", "randompairings")

SimConfig = namedtuple(
    "SimConfig",
    [
        "topology", "pattern", "offered_load", "packet_size", "injectors",
        "vc_count", "queue_capacity", "warmup_cycles", "measure_cycles",
        "seed",
    ],
)
SimConfig.__new__.__defaults__ = (
    "uniform", 0.1, 16, 6, 3, 4, 10000, 10000, 1,
)

SimStats = namedtuple(
    "SimStats",
    [
        "topology", "pattern", "offered_load", "seed", "cycles",
        "accepted_load", "avg_latency", "delivered_packets",
        "created_packets", "delivered_total", "backpressure_stalls",
        "in_network_end", "queued_end", "first_delivery_cycle",
        "max_delivery_gap", "pattern_info",
    ],
)


class _Packet:
    __slots__ = ("rec", "left", "port", "vc", "dim", "ready", "birth")

    def __init__(self, rec, left, port, birth, ready):
        self.rec = rec
        self.left = left
        self.port = port
        self.vc = -1
        self.dim = -1
        self.ready = ready
        self.birth = birth


def build_graph(topology):
    """Construct the configured graph, normalizing errors to ConfigError."""
    if not isinstance(topology, dict) or "kind" not in topology:
        raise ConfigError("topology must be a dict with a 'kind' key")
    try:
        return lattice.make_topology(**topology)
    except LatticeError as exc:
        raise ConfigError(f"bad topology: {exc}") from exc
    except TypeError as exc:
        raise ConfigError(f"bad topology fields: {exc}") from exc


def validate_config(config):
    """Check a SimConfig, returning the built graph."""
    g = build_graph(config.topology)
    if g.order > MAX_SIM_ORDER:
        raise ConfigError(f"simulation supports order <= {MAX_SIM_ORDER}")
    if g.order < 2:
        raise ConfigError("simulation needs at least two nodes")
    if config.pattern not in PATTERNS:
        raise ConfigError(f"unknown pattern {config.pattern!r}")
    if not 0.0 <= config.offered_load <= 1.0:
        raise ConfigError("offered_load must lie in [0, 1]")
    for field in ("packet_size", "injectors", "vc_count", "queue_capacity",
                  "measure_cycles"):
        if getattr(config, field) < 1:
            raise ConfigError(f"{field} must be at least 1")
    if config.warmup_cycles < 0:
        raise ConfigError("warmup_cycles must be non-negative")
    return g


def topology_label(topology):
    """Compact CSV-safe name, e.g. bcc4(2) or torus(4x4x4x2)."""
    kind = topology.get("kind", "?")
    if "a" in topology and topology["a"] is not None:
        return f"{kind}({topology['a']})"
    if "sides" in topology and topology["sides"] is not None:
        return f"{kind}({'x'.join(str(s) for s in topology['sides'])})"
    if "matrix" in topology and topology["matrix"] is not None:
        return f"{kind}(matrix)"
    return kind


def _pattern_setup(g, pattern, rng):
    """Static destination map (or None for uniform), metadata, silent node."""
    n_nodes = g.order
    if pattern == "uniform":
        return None, (), -1
    if pattern == "antipodal":
        dist = lattice.single_source_distances(g)
        diameter = int(dist.max())
        far0 = [g.label(i) for i in range(n_nodes) if dist[i] == diameter]
        dest = []
        for i in range(n_nodes):
            src = g.label(i)
            dest.append(min(
                g.index(g.reduce(tuple(f + s for f, s in zip(far, src))))
                for far in far0
            ))
        return dest, (), -1
    if pattern == "centralsymmetric":
        dest = [
            g.index(g.reduce(tuple(-x for x in g.label(i))))
            for i in range(n_nodes)
        ]
        fixed = sum(1 for i, d in enumerate(dest) if d == i)
        return dest, (("fixed_points", fixed),), -1
    perm = list(range(n_nodes))
    rng.shuffle(perm)
    dest = [-1] * n_nodes
    for k in range(0, n_nodes - 1, 2):
        dest[perm[k]] = perm[k + 1]
        dest[perm[k + 1]] = perm[k]
    silent = perm[-1] if n_nodes % 2 else -1
    return dest, (("silent_node", silent),), silent


def run_simulation(config):
    """Run one simulation and collect statistics.

    Statistics cover deliveries whose completion cycle falls in the
    measurement window [warmup, warmup + measure); accepted load is
    delivered phits in the window per cycle per node.  A delivery is
    recorded at its final-hop grant with the completion cycle, so packet
    conservation (created = delivered + in network + queued) is exact at
    any horizon.
    """
    g = validate_config(config)
    rng = random.Random(config.seed)
    n = g.n
    n_nodes = g.order
    ports = 2 * n
    size = config.packet_size
    cap = config.queue_capacity
    vc_count = config.vc_count
    inj_count = config.injectors
    warmup = config.warmup_cycles
    measure = config.measure_cycles
    total_cycles = warmup + measure
    window_end = total_cycles

    labels = [g.label(i) for i in range(n_nodes)]
    nbr_np = g.neighbor_table()
    nbr = [[int(nbr_np[u][p]) for p in range(ports)] for u in range(n_nodes)]

    dest_map, pattern_info, silent = _pattern_setup(g, config.pattern, rng)

    record_pool = {}

    def records_for(si, di):
        delta = g.delta(labels[si], labels[di])
        didx = g.index(delta)
        pool = record_pool.get(didx)
        if pool is None:
            pool = tuple(
                rec.r for rec in routing.minimal_record_choices(g, delta)
            )
            record_pool[didx] = pool
        return pool

    n_links = n_nodes * ports
    link_free = [0] * n_links
    used = [[0] * vc_count for _ in range(n_links)]
    bufq = [[[] for _ in range(vc_count)] for _ in range(n_links)]
    buf_head = [[0] * vc_count for _ in range(n_links)]
    inj_used = [[0] * inj_count for _ in range(n_nodes)]
    injq = [[[] for _ in range(inj_count)] for _ in range(n_nodes)]
    inj_head = [[0] * inj_count for _ in range(n_nodes)]
    req_transit = [{} for _ in range(n_nodes)]
    req_inject = [{} for _ in range(n_nodes)]

    wheel = {}
    releases = {}

    def arm(link, cycle):
        bucket = wheel.get(cycle)
        if bucket is None:
            wheel[cycle] = {link}
        else:
            bucket.add(link)

    p_inject = config.offered_load / size
    created = 0
    delivered_total = 0
    backpressure = 0
    delivered_window_packets = 0
    latency_sum = 0
    first_delivery = -1
    last_delivery = -1
    max_gap = 0

    for t in range(total_cycles):
        # Frees scheduled for this cycle: buffer slots wake the feeder link.
        due = releases.pop(t, None)
        if due is not None:
            for key, vc in due:
                if vc >= 0:
                    used[key][vc] -= 1
                    u_feed = nbr[key // ports][(key % ports) ^ 1]
                    arm(u_feed * ports + key % ports, t)
                else:
                    inj_used[key // inj_count][key % inj_count] -= 1

        # Injection: Bernoulli(load/size) per node; stall when all queues full.
        if p_inject > 0.0:
            for u in range(n_nodes):
                if u == silent or rng.random() >= p_inject:
                    continue
                queues = inj_used[u]
                qi = 0
                best = queues[0]
                for j in range(1, inj_count):
                    if queues[j] < best:
                        best = queues[j]
                        qi = j
                if best >= cap:
                    backpressure += 1
                    continue
                if dest_map is None:
                    di = rng.randrange(n_nodes - 1)
                    di += di >= u
                else:
                    di = dest_map[u]
                    if di == u:
                        di = rng.randrange(n_nodes - 1)
                        di += di >= u
                pool = records_for(u, di)
                rec = pool[rng.randrange(len(pool))] if len(pool) > 1 else pool[0]
                left = 0
                port = -1
                for i in range(n - 1, -1, -1):
                    c = rec[i]
                    if c:
                        left += c if c > 0 else -c
                        port = 2 * i + (0 if c > 0 else 1)
                pkt = _Packet(list(rec), left, port, t, t + 1)
                created += 1
                queues[qi] += 1
                q = injq[u][qi]
                q.append(pkt)
                if len(q) - inj_head[u][qi] == 1:
                    req_inject[u].setdefault(port, []).append(qi)
                    arm(u * ports + port, t + 1)

        # Arbitration over armed links, ascending link index.
        due = wheel.pop(t, None)
        if due is None:
            continue
        for link in sorted(due):
            if link_free[link] > t:
                continue
            u, p = divmod(link, ports)
            treq = req_transit[u].get(p)
            ireq = req_inject[u].get(p)
            if not treq and not ireq:
                continue
            v = nbr[u][p]
            vkey = v * ports + p
            vused = used[vkey]
            dim = p >> 1
            retry = 0
            winners = None
            if treq:
                for key, vc in treq:
                    q = bufq[key][vc]
                    pkt = q[buf_head[key][vc]]
                    if pkt.ready > t:
                        if retry == 0 or pkt.ready < retry:
                            retry = pkt.ready
                        continue
                    if pkt.left == 1:
                        ok = True
                    elif pkt.dim == dim:
                        ok = cap - vused[pkt.vc] >= 1
                    else:
                        ok = any(cap - c >= 2 for c in vused)
                    if ok:
                        if winners is None:
                            winners = [(0, key, vc)]
                        else:
                            winners.append((0, key, vc))
            if winners is None and ireq:
                for qi in ireq:
                    q = injq[u][qi]
                    pkt = q[inj_head[u][qi]]
                    if pkt.ready > t:
                        if retry == 0 or pkt.ready < retry:
                            retry = pkt.ready
                        continue
                    if pkt.left == 1 or any(cap - c >= 2 for c in vused):
                        if winners is None:
                            winners = [(1, qi, 0)]
                        else:
                            winners.append((1, qi, 0))
            if winners is None:
                if retry:
                    arm(link, retry)
                continue
            klass, a1, a2 = (
                winners[0] if len(winners) == 1 else rng.choice(winners)
            )

            # Pop the winner from its queue and expose the next head.
            if klass == 0:
                q = bufq[a1][a2]
                head = buf_head[a1][a2]
                pkt = q[head]
                head += 1
                if head == len(q):
                    del q[:]
                    head = 0
                elif head > 32:
                    del q[:head]
                    head = 0
                buf_head[a1][a2] = head
                req_transit[u][p].remove((a1, a2))
                releases.setdefault(t + size, []).append((a1, a2))
                if head < len(q):
                    nxt = q[head]
                    req_transit[u].setdefault(nxt.port, []).append((a1, a2))
                    arm(u * ports + nxt.port, max(t + 1, nxt.ready))
            else:
                q = injq[u][a1]
                head = inj_head[u][a1]
                pkt = q[head]
                head += 1
                if head == len(q):
                    del q[:]
                    head = 0
                elif head > 32:
                    del q[:head]
                    head = 0
                inj_head[u][a1] = head
                req_inject[u][p].remove(a1)
                releases.setdefault(t + size, []).append(
                    (u * inj_count + a1, -1)
                )
                if head < len(q):
                    nxt = q[head]
                    req_inject[u].setdefault(nxt.port, []).append(a1)
                    arm(u * ports + nxt.port, max(t + 1, nxt.ready))

            link_free[link] = t + size
            arm(link, t + size)
            rec = pkt.rec
            rec[dim] += -1 if p & 1 == 0 else 1
            pkt.left -= 1

            if pkt.left == 0:
                done = t + size - 1
                delivered_total += 1
                if first_delivery < 0:
                    first_delivery = done
                elif done - last_delivery > max_gap:
                    max_gap = done - last_delivery
                last_delivery = done
                if warmup <= done < window_end:
                    delivered_window_packets += 1
                    latency_sum += done - pkt.birth
                continue

            if pkt.dim == dim and pkt.vc >= 0:
                vc = pkt.vc
            else:
                best_free = -1
                choices = None
                for c in range(vc_count):
                    f = cap - vused[c]
                    if f >= 2:
                        if f > best_free:
                            best_free = f
                            choices = [c]
                        elif f == best_free:
                            choices.append(c)
                vc = choices[0] if len(choices) == 1 else rng.choice(choices)
                pkt.vc = vc
                pkt.dim = dim
            vused[vc] += 1
            pkt.ready = t + 1
            nport = -1
            for i in range(dim, n):
                c = rec[i]
                if c:
                    nport = 2 * i + (0 if c > 0 else 1)
                    break
            pkt.port = nport
            q = bufq[vkey][vc]
            q.append(pkt)
            if len(q) - buf_head[vkey][vc] == 1:
                req_transit[v].setdefault(nport, []).append((vkey, vc))
                arm(v * ports + nport, t + 1)

    queued_end = sum(
        len(q) - inj_head[u][qi]
        for u in range(n_nodes)
        for qi, q in enumerate(injq[u])
    )
    in_network_end = sum(
        len(bufq[key][vc]) - buf_head[key][vc]
        for key in range(n_links)
        for vc in range(vc_count)
    )
    if last_delivery >= 0 and total_cycles - 1 - last_delivery > max_gap:
        max_gap = total_cycles - 1 - last_delivery
    if first_delivery < 0:
        max_gap = total_cycles
    accepted = delivered_window_packets * size / (measure * n_nodes)
    avg_latency = (
        latency_sum / delivered_window_packets if delivered_window_packets
        else 0.0
    )
    return SimStats(
        topology_label(config.topology), config.pattern,
        config.offered_load, config.seed, total_cycles, accepted,
        avg_latency, delivered_window_packets, created, delivered_total,
        backpressure, in_network_end, queued_end, first_delivery, max_gap,
        pattern_info,
    )


def run_many(config, seeds):
    """Run the same configuration across seeds, serially, in seed order."""
    return tuple(
        run_simulation(config._replace(seed=s)) for s in seeds
    )


def _sweep_task(config):
    return run_simulation(config)


def sweep(config, loads, seeds=5, max_workers=None):
    """Load sweep: `seeds` runs per offered load, averaged per load.

    Runs are independent; they execute on a process pool whose size is
    capped by the LATTICE_NET_THREADS environment variable (default: CPU
    count).  Results merge deterministically regardless of worker timing.

    Returns:
        List of row dicts with keys topology, pattern, offered, accepted,
        avg_latency, seed_count, ordered like `loads`.
    """
    if seeds < 1:
        raise ConfigError("sweep needs at least one seed")
    validate_config(config)
    tasks = [
        config._replace(offered_load=load, seed=config.seed + k)
        for load in loads
        for k in range(seeds)
    ]
    env_cap = os.environ.get("LATTICE_NET_THREADS", "")
    try:
        cap_val = int(env_cap) if env_cap else (os.cpu_count() or 1)
    except ValueError:
        raise ConfigError("LATTICE_NET_THREADS must be an integer") from None
    if max_workers is None:
        max_workers = cap_val
    max_workers = max(1, min(max_workers, cap_val, len(tasks)))
    if max_workers == 1:
        results = [_sweep_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(_sweep_task, tasks, chunksize=1))
    rows = []
    label = topology_label(config.topology)
    for i, load in enumerate(loads):
        group = results[i * seeds:(i + 1) * seeds]
        rows.append({
            "topology": label,
            "pattern": config.pattern,
            "offered": load,
            "accepted": sum(s.accepted_load for s in group) / seeds,
            "avg_latency": sum(s.avg_latency for s in group) / seeds,
            "seed_count": seeds,
        })
    return rows
