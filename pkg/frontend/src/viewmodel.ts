/**
 * Pure view-model derivation: aggregate poll payload in, render-ready panel
 * models out.  All affordance rules live here so they are unit-testable
 * without a browser.
 */
import type {
  AggregateState,
  ControllerState,
  DealerState,
  GraphEdge,
  NodeState,
} from './types.js';

export interface ShareRowView {
  request: string;
  to: string;
  index: number;
  isMain: boolean;
  /** Raise-hand is offered only where this controller is the main participant. */
  raiseEnabled: boolean;
  share: string;
}

export interface RespondView {
  reference: string;
  request: string;
  /** Greyed out once responded or once the request was approved. */
  respondEnabled: boolean;
}

export interface ControllerPanel {
  name: string;
  error?: string;
  shares: ShareRowView[];
  responds: RespondView[];
  statuses: { reference: string; status: string; request: string }[];
  forwardCount: number;
}

export interface NodePanel {
  name: string;
  error?: string;
  entries: {
    reference: string;
    request: string | null;
    executed: boolean;
    executions: string[];
  }[];
  forwardCount: number;
}

export interface DealerPanel {
  error?: string;
  scheme: string;
  batchId: string | null;
  pending: { reference: string; state: string; request: string }[];
  auditableRows: number;
}

export interface RouteRow {
  a: string;
  b: string;
  weight: number;
  disabled: boolean;
}

export function controllerPanel(
  name: string,
  state: ControllerState | undefined,
  error?: string,
): ControllerPanel {
  if (!state) {
    return { name, error: error ?? 'no state', shares: [], responds: [], statuses: [], forwardCount: 0 };
  }
  return {
    name,
    shares: state.shares.map((s) => ({
      request: s.request,
      to: s.to,
      index: s.index,
      isMain: s.is_main,
      raiseEnabled: s.is_main,
      share: s.share,
    })),
    responds: Object.entries(state.solicitations).map(([reference, sol]) => ({
      reference,
      request: sol.request,
      respondEnabled: !sol.responded,
    })),
    statuses: Object.entries(state.statuses).map(([reference, st]) => ({
      reference,
      status: st.status,
      request: st.request,
    })),
    forwardCount: state.forward_log.length,
  };
}

export function nodePanel(name: string, state: NodeState | undefined, error?: string): NodePanel {
  if (!state) return { name, error: error ?? 'no state', entries: [], forwardCount: 0 };
  return {
    name,
    entries: Object.entries(state.entries).map(([reference, e]) => ({
      reference,
      request: e.request,
      executed: e.executed,
      executions: e.executions.map((x) => x.command),
    })),
    forwardCount: state.forward_log.length,
  };
}

export function dealerPanel(state: DealerState | undefined, error?: string): DealerPanel {
  if (!state) return { error: error ?? 'no state', scheme: '-', batchId: null, pending: [], auditableRows: 0 };
  return {
    scheme: state.scheme
      ? `${state.scheme.scheme} (t=${state.scheme.threshold}, n=${state.scheme.participants})`
      : 'unconfigured',
    batchId: state.batch_id,
    pending: Object.entries(state.pending).map(([reference, p]) => ({
      reference,
      state: p.state,
      request: p.request,
    })),
    auditableRows: state.actions.length,
  };
}

export function routeTable(edges: GraphEdge[]): RouteRow[] {
  return edges
    .map((e) => ({ a: e.a, b: e.b, weight: e.weight, disabled: e.disabled }))
    .sort((x, y) => (x.a + x.b).localeCompare(y.a + y.b));
}

/** Wrap a flat list of panels into rows of at most `perRow` items. */
export function wrapRows<T>(items: T[], perRow: number): T[][] {
  const rows: T[][] = [];
  for (let i = 0; i < items.length; i += perRow) {
    rows.push(items.slice(i, i + perRow));
  }
  return rows;
}

export interface DashboardView {
  dealer: DealerPanel;
  controllerRows: ControllerPanel[][];
  nodeRows: NodePanel[][];
  routes: RouteRow[];
  graphError?: string;
}

export function deriveView(agg: AggregateState, perRow = 4): DashboardView {
  const controllers = Object.keys(agg.controllers).sort();
  const nodes = Object.keys(agg.nodes).sort();
  return {
    dealer: dealerPanel(agg.dealer.state, agg.dealer.error),
    controllerRows: wrapRows(
      controllers.map((n) => controllerPanel(n, agg.controllers[n].state, agg.controllers[n].error)),
      perRow,
    ),
    nodeRows: wrapRows(
      nodes.map((n) => nodePanel(n, agg.nodes[n].state, agg.nodes[n].error)),
      perRow,
    ),
    routes: agg.graph ? routeTable(agg.graph.edges) : [],
    graphError: agg.graphError,
  };
}
