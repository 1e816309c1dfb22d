"""The run loop: drives workload, slice control plane, MAC and RIC through one run.

Event handling in brief:

- ``request-arrival``: a UE asks for an LLM service. The first request of a UE for
  a service starts the slice session handshake; requests wait until their session
  is Active and are denied when it is Rejected. An admitted request starts its
  response stream after the uplink delay.
- ``control-message``: one hop of the handshake (SliceRequest, Register,
  PermissionQuery, PermissionReply), ``control_delay`` apart.
- ``token-ready``: one token enters its (slice, UE) queue.
- ``tti-tick``: background credit is enqueued, then the MAC schedules and transmits one TTI.
- ``timeout-check``: starved response streams are disconnected.
- ``ric-tick``: KPI reports go to the controller and its decision is applied (dynamic mode).
- ``horizon-end``: Active sessions are released and the run stops.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Optional, Tuple

from llm_slice.config.enums import EventKinds, MessageKinds, SchedulerModes, SliceStates, TraceKinds
from llm_slice.config.scenario import Scenario
from llm_slice.engine.events import Event, EventQueue, SimTime, ms_to_us
from llm_slice.engine.rng import RngStream
from llm_slice.engine.trace import RunTrace
from llm_slice.errors import LlmSliceError, SimulationError
from llm_slice.mac.queues import QueueKey, UeQueue
from llm_slice.mac.scheduler import MacScheduler
from llm_slice.metrics.records import StreamLedger
from llm_slice.ric.controllers import ProportionalDemandController, QuotaController, apply_decision
from llm_slice.ric.kpi import build_report, start_window
from llm_slice.slicectl.fsm import ControlMessage
from llm_slice.slicectl.permissions import authorize
from llm_slice.slicectl.sessions import SessionTable
from llm_slice.workload.generators import (
    sample_request_arrivals,
    sample_token_stream,
    token_enqueue_schedule,
)
from llm_slice.workload.profiles import LlmRequest, TokenStream

__all__ = [
    "Workload",
    "build_workload",
    "Simulation",
    "run",
]

logger = logging.getLogger(__name__)

_NEXT_HOP = {
    MessageKinds.SLICE_REQUEST: MessageKinds.REGISTER,
    MessageKinds.REGISTER: MessageKinds.PERMISSION_QUERY,
    MessageKinds.PERMISSION_QUERY: MessageKinds.PERMISSION_REPLY,
}


@dataclass(frozen=True)
class Workload:
    """Every LLM request of a run and the response each one will get."""

    requests: Tuple[LlmRequest, ...]
    streams: Mapping[int, TokenStream]


def build_workload(scenario: Scenario, master_seed: int) -> Workload:
    """Sample the requests and responses of one seed.

    Each (UE, service) pair draws its arrivals from its own stream
    ``arrivals/<ue>/<service>``; requests are then numbered by (time, ue, service)
    and their responses drawn in that order from the ``responses`` stream. The
    result does not depend on the scheduler mode.
    """

    horizon = scenario.horizon_us
    sampled: List[LlmRequest] = []
    if horizon > 0:
        for spec in sorted(scenario.arrivals, key=lambda a: (a.ue_id, a.service_id)):
            rng = RngStream(master_seed, f"arrivals/{spec.ue_id}/{spec.service_id}")
            sampled.extend(
                sample_request_arrivals(spec.process, spec.ue_id, horizon, rng, service_id=spec.service_id)
            )

    sampled.sort(key=lambda r: (r.t_arrival, r.ue_id, r.service_id))
    requests = tuple(replace(r, request_id=i) for i, r in enumerate(sampled))

    rng = RngStream(master_seed, "responses")
    streams = {
        r.request_id: sample_token_stream(scenario.service(r.service_id), r.request_id, rng) for r in requests
    }
    return Workload(requests, streams)


class Simulation:
    """One run of a scenario with one master seed.

    Args:
        scenario (Scenario): a validated scenario.
        master_seed (int): seed of every random stream of the run.
        keep_records (bool): keep the trace records (and per-TTI allocation rows). Defaults to True.
        hash_records (bool): compute the trace digest. Defaults to True.
        workload (Workload, optional): use these requests instead of sampling them.
        controller (QuotaController, optional): RIC controller for dynamic mode.
            Defaults to a ProportionalDemandController with the scenario's alpha.

    Raises:
        AdmissionRejectedError: the slices overbook the guaranteed share budget.

    Example:

    .. code-block:: python

        trace = Simulation(load_scenario("tab1.json"), master_seed=1).run()
        print(trace.digest())
    """

    def __init__(
        self,
        scenario: Scenario,
        master_seed: int,
        keep_records: bool = True,
        hash_records: bool = True,
        workload: Optional[Workload] = None,
        controller: Optional[QuotaController] = None,
    ) -> None:
        self.scenario = scenario
        self.master_seed = master_seed
        self.registry = scenario.build_registry()
        self.workload = workload if workload is not None else build_workload(scenario, master_seed)

        self.horizon: SimTime = scenario.horizon_us
        self.tti_us = scenario.tti.tti_us
        self.control_delay: SimTime = ms_to_us(scenario.delays.control_delay_ms)
        self.uplink_delay: SimTime = ms_to_us(scenario.delays.uplink_delay_ms)

        queues: List[UeQueue] = []
        for ue in scenario.ues:
            for service_id in ue.services:
                slice_id = scenario.slice_of_service(service_id).slice_id
                queues.append(UeQueue(ue.ue_id, slice_id, ue.link.bytes_per_prb))
        background = scenario.background_slice
        for flow in scenario.background:
            queues.append(UeQueue(flow.ue_id, background.slice_id, scenario.ue(flow.ue_id).link.bytes_per_prb))

        self.mac = MacScheduler(
            scenario.mode,
            scenario.tti,
            queues,
            initial_quota=scenario.initial_quota(),
            keep_allocation_rows=keep_records,
        )
        self.sessions = SessionTable(strict=scenario.strict_fsm)
        for flow in scenario.background:
            self.sessions.open(background.slice_id, flow.ue_id, SliceStates.ACTIVE)
        self._pending_setup: Dict[Tuple[str, str], List[int]] = {}
        self._background_credit = [0.0 for _ in scenario.background]

        self.controller: Optional[QuotaController] = None
        if scenario.mode.kind == SchedulerModes.DYNAMIC:
            self.controller = controller or ProportionalDemandController(alpha=scenario.ric.alpha)

        self.ledger = StreamLedger()
        self.queue = EventQueue()
        self.trace = RunTrace(keep_records=keep_records, hash_records=hash_records)
        self.trace.scenario_name = scenario.name
        self.trace.mode = scenario.mode.name
        self.trace.seed = master_seed
        self.trace.horizon_us = self.horizon
        self.trace.allocation_log = self.mac.allocation_log

        self._requests = {r.request_id: r for r in self.workload.requests}
        self._finished = False

    # ================ #
    #    Scheduling    #
    # ================ #

    def _schedule_before_horizon(self, time: SimTime, kind: EventKinds, payload=None) -> None:
        if time < self.horizon:
            self.queue.schedule(time, kind, payload)

    def _schedule_initial_events(self) -> None:
        for request in self.workload.requests:
            self._schedule_before_horizon(request.t_arrival, EventKinds.REQUEST_ARRIVAL, request.request_id)
        self._schedule_before_horizon(0, EventKinds.TTI_TICK, 0)
        self._schedule_before_horizon(
            ms_to_us(self.scenario.timeouts.check_period_ms), EventKinds.TIMEOUT_CHECK
        )
        if self.controller is not None:
            self._schedule_before_horizon(ms_to_us(self.scenario.ric.epoch_ms), EventKinds.RIC_TICK, 1)
        self.queue.schedule(self.horizon, EventKinds.HORIZON_END)

    def _send(self, kind: MessageKinds, slice_id: str, ue_id: str, now: SimTime, ok: Optional[bool] = None) -> None:
        message = ControlMessage(kind, slice_id, ue_id, now, ok)
        self.queue.schedule(now + self.control_delay, EventKinds.CONTROL_MESSAGE, message)

    # ============== #
    #    Handlers    #
    # ============== #

    def _on_request(self, event: Event) -> None:
        request = self._requests[event.payload]
        slice_id = self.scenario.slice_of_service(request.service_id).slice_id
        self.trace.requests += 1
        self.trace.add(
            event.time,
            TraceKinds.REQUEST,
            request_id=request.request_id,
            ue_id=request.ue_id,
            service_id=request.service_id,
        )

        key = (slice_id, request.ue_id)
        session = self.sessions.get(*key)
        if session is None:
            if key not in self._pending_setup:
                self._pending_setup[key] = []
                self._send(MessageKinds.SLICE_REQUEST, slice_id, request.ue_id, event.time)
            self._pending_setup[key].append(request.request_id)
        elif session.state == SliceStates.ACTIVE:
            self._start_stream(request, slice_id, event.time)
        elif session.state in (SliceStates.REJECTED, SliceStates.RELEASED):
            self.trace.denied_requests += 1
        else:
            session.waiting.append(request.request_id)

    def _on_control(self, event: Event) -> None:
        message: ControlMessage = event.payload
        key = (message.slice_id, message.ue_id)
        self.trace.add(
            event.time,
            TraceKinds.CONTROL,
            message=message.label,
            slice_id=message.slice_id,
            ue_id=message.ue_id,
            t_sent=message.t_sent,
        )

        if message.kind == MessageKinds.SLICE_REQUEST:
            session = self.sessions.open(*key)
            session.waiting.extend(self._pending_setup.pop(key, []))
            self._send(MessageKinds.REGISTER, *key, event.time)
            return

        state = self.sessions.apply(message)
        if state is None:
            return

        if message.kind == MessageKinds.PERMISSION_QUERY:
            service_id = self.registry.get(message.slice_id).service_id
            ok = authorize(self.scenario.permissions, message.ue_id, service_id)
            self._send(MessageKinds.PERMISSION_REPLY, *key, event.time, ok=ok)
        elif message.kind in _NEXT_HOP:
            self._send(_NEXT_HOP[message.kind], *key, event.time)
        elif message.kind == MessageKinds.PERMISSION_REPLY:
            self._on_verdict(message, state, event.time)

    def _on_verdict(self, message: ControlMessage, state: SliceStates, now: SimTime) -> None:
        session = self.sessions.get(message.slice_id, message.ue_id)
        waiting, session.waiting = session.waiting, []
        notification = MessageKinds.ACTIVATE if state == SliceStates.ACTIVE else MessageKinds.REJECT
        self.trace.add(
            now,
            TraceKinds.CONTROL,
            message=notification.value,
            slice_id=message.slice_id,
            ue_id=message.ue_id,
            t_sent=now,
        )
        if state == SliceStates.ACTIVE:
            for request_id in waiting:
                self._start_stream(self._requests[request_id], message.slice_id, now)
        else:
            self.trace.denied_requests += len(waiting)
            logger.info("slice %s rejected for %s", message.slice_id, message.ue_id)

    def _start_stream(self, request: LlmRequest, slice_id: str, now: SimTime) -> None:
        stream = self.workload.streams[request.request_id]
        key: QueueKey = (slice_id, request.ue_id)
        self.ledger.start(request.request_id, slice_id, request.ue_id, request.t_arrival, stream.total_bytes)
        self.mac.open_stream(request.request_id, key, stream.total_bytes)
        for time, nbytes in token_enqueue_schedule(stream, now + self.uplink_delay):
            self._schedule_before_horizon(time, EventKinds.TOKEN_READY, (request.request_id, key, nbytes))

    def _on_token(self, event: Event) -> None:
        request_id, key, nbytes = event.payload
        if self.mac.enqueue(key, request_id, nbytes, event.time):
            self.trace.add(event.time, TraceKinds.TOKEN, request_id=request_id, bytes=nbytes)

    def _accrue_background(self, now: SimTime) -> None:
        slice_id = self.scenario.background_slice.slice_id if self.scenario.background else ""
        for i, flow in enumerate(self.scenario.background):
            self._background_credit[i] += flow.rate_bytes_per_s * self.tti_us / 1_000_000
            while self._background_credit[i] >= flow.packet_bytes:
                self._background_credit[i] -= flow.packet_bytes
                self.mac.enqueue((slice_id, flow.ue_id), None, flow.packet_bytes, now)

    def _on_tti(self, event: Event) -> None:
        tti_index = event.payload
        self._accrue_background(event.time)
        allocation, fragments = self.mac.run_tti(tti_index, event.time)

        for fragment in fragments:
            self.trace.add(
                fragment.time,
                TraceKinds.DELIVERY,
                request_id=fragment.request_id,
                slice_id=fragment.slice_id,
                bytes=fragment.bytes,
            )
            if self.ledger.on_bytes(fragment.request_id, fragment.bytes, fragment.time):
                self.mac.close_stream(fragment.request_id, completed=True)

        if allocation.grants and self.trace.is_recording:
            self.trace.add(
                event.time,
                TraceKinds.ALLOCATION,
                tti=tti_index,
                grants=[
                    [slice_id, ue_id, prbs, allocation.per_queue_used.get((slice_id, ue_id), 0)]
                    for (slice_id, ue_id), prbs in sorted(allocation.grants.items())
                ],
            )
        self._schedule_before_horizon(event.time + self.tti_us, EventKinds.TTI_TICK, tti_index + 1)

    def _on_timeout_check(self, event: Event) -> None:
        for disconnection in self.mac.check_timeouts(event.time, self.scenario.timeouts.t_disc_ms):
            self.ledger.abort(disconnection.request_id)
            self.trace.disconnections.append(disconnection)
            self.trace.add(
                event.time,
                TraceKinds.DISCONNECT,
                request_id=disconnection.request_id,
                slice_id=disconnection.slice_id,
                ue_id=disconnection.ue_id,
                bytes_undelivered=disconnection.bytes_undelivered,
                bytes_wasted=disconnection.bytes_wasted,
            )
        self._schedule_before_horizon(
            event.time + ms_to_us(self.scenario.timeouts.check_period_ms), EventKinds.TIMEOUT_CHECK
        )

    def _on_ric(self, event: Event) -> None:
        epoch = event.payload
        reports = [
            build_report(self.mac, slice_id, event.time)
            for slice_id in self.registry.slice_ids
            if self.sessions.is_slice_active(slice_id)
        ]
        descriptors = {desc.slice_id: desc for desc in self.registry}
        decision = self.controller.decide(epoch, reports, descriptors)
        if decision is not None:
            effective = apply_decision(self.mac, decision, event.time, self.control_delay)
            self.trace.decisions.append(decision)
            self.trace.add(
                event.time,
                TraceKinds.RIC,
                epoch=epoch,
                effective_us=effective,
                quotas=decision.quotas.as_dict(),
                demand={k: decision.rationale[k] for k in sorted(decision.rationale)},
            )
        for slice_id in self.registry.slice_ids:
            start_window(self.mac, slice_id, event.time)
        self._schedule_before_horizon(
            event.time + ms_to_us(self.scenario.ric.epoch_ms), EventKinds.RIC_TICK, epoch + 1
        )

    def _on_horizon(self, event: Event) -> None:
        for session in self.sessions.active_sessions():
            self.sessions.apply(ControlMessage(MessageKinds.RELEASE, session.slice_id, session.ue_id, event.time))
            self.trace.add(
                event.time,
                TraceKinds.CONTROL,
                message=MessageKinds.RELEASE.value,
                slice_id=session.slice_id,
                ue_id=session.ue_id,
                t_sent=event.time,
            )
        self.trace.add(
            event.time,
            TraceKinds.HORIZON,
            requests=self.trace.requests,
            streams_open=self.ledger.n_open,
            denied=self.trace.denied_requests,
        )
        self._finished = True

    # ============== #
    #    Run loop    #
    # ============== #

    def run(self) -> RunTrace:
        """Process events until the horizon and return the trace.

        Raises:
            SimulationError: any error while handling an event, naming that event.
        """

        if self._finished:
            raise SimulationError("a Simulation object runs only once")

        handlers = {
            EventKinds.REQUEST_ARRIVAL: self._on_request,
            EventKinds.CONTROL_MESSAGE: self._on_control,
            EventKinds.TOKEN_READY: self._on_token,
            EventKinds.TTI_TICK: self._on_tti,
            EventKinds.TIMEOUT_CHECK: self._on_timeout_check,
            EventKinds.RIC_TICK: self._on_ric,
            EventKinds.HORIZON_END: self._on_horizon,
        }

        logger.info(
            "run %s mode=%s seed=%d requests=%d",
            self.scenario.name,
            self.scenario.mode.name,
            self.master_seed,
            len(self.workload.requests),
        )
        self._schedule_initial_events()
        while not self._finished:
            event = self.queue.pop_next()
            if event is None:
                raise SimulationError("event queue ran dry before the horizon")
            try:
                handlers[event.kind](event)
            except SimulationError as exc:
                exc.args = (f"{exc} [while handling {event.kind.value} at {event.time} us, seq {event.seq}]",)
                raise
            except (LlmSliceError, ValueError, KeyError) as exc:
                raise SimulationError(
                    f"{exc!r} [while handling {event.kind.value} at {event.time} us, seq {event.seq}]"
                ) from exc

        self.trace.deliveries = self.ledger.records()
        self.trace.invalid_transitions = self.sessions.invalid_transitions
        self.trace.background_dropped_bytes = self.mac.background_dropped_bytes
        logger.info(
            "done %s mode=%s seed=%d streams=%d disconnections=%d",
            self.scenario.name,
            self.scenario.mode.name,
            self.master_seed,
            len(self.trace.deliveries),
            len(self.trace.disconnections),
        )
        return self.trace


def run(
    scenario: Scenario,
    master_seed: int,
    keep_records: bool = True,
    hash_records: bool = True,
    workload: Optional[Workload] = None,
) -> RunTrace:
    """Run ``scenario`` once with ``master_seed``; see :class:`Simulation`."""

    return Simulation(scenario, master_seed, keep_records, hash_records, workload).run()
