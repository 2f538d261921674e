/** Shapes of the backend /state and /graph payloads the dashboard consumes. */

export interface GraphEdge {
  a: string;
  b: string;
  weight: number;
  disabled: boolean;
}

export interface GraphView {
  vertices: string[];
  urls: Record<string, string>;
  edges: GraphEdge[];
}

export interface ShareRow {
  from: string;
  to: string;
  request: string;
  index: number;
  is_main: boolean;
  participants: string[];
  share: string;
}

export interface Solicitation {
  request: string;
  responded: boolean;
}

export interface ControllerState {
  status: string;
  name: string;
  shares: ShareRow[];
  solicitations: Record<string, Solicitation>;
  statuses: Record<string, { status: string; request: string }>;
  forward_log: ForwardEntry[];
}

export interface NodeExecution {
  command: string;
  status: string;
  output: string;
}

export interface NodeEntry {
  request: string | null;
  executed: boolean;
  executions: NodeExecution[];
  events: unknown[];
}

export interface NodeState {
  status: string;
  name: string;
  entries: Record<string, NodeEntry>;
  forward_log: ForwardEntry[];
}

export interface DealerState {
  status: string;
  name: string;
  scheme: { scheme: string; threshold: number; participants: number } | null;
  strategy: string;
  batch_id: string | null;
  shares_table: unknown[];
  actions: unknown[][];
  pending: Record<string, { state: string; request: string; collected: number[] }>;
  forward_log: ForwardEntry[];
}

export interface ForwardEntry {
  reference: string;
  origin: string;
  destination: string;
}

/** One service's slot in the aggregate poll; `error` set when unreachable. */
export interface ServiceSlot<T> {
  state?: T;
  error?: string;
}

export interface AggregateState {
  graph: GraphView | null;
  graphError?: string;
  dealer: ServiceSlot<DealerState>;
  controllers: Record<string, ServiceSlot<ControllerState>>;
  nodes: Record<string, ServiceSlot<NodeState>>;
}
