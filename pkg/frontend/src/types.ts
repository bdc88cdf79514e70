// Payload shapes of the compass-kg HTTP API. The UI renders these verbatim;
// it never derives coverage numbers of its own.

export interface TermJson {
  type: "iri" | "literal" | "blank";
  value: string;
  prefixed?: string;
  datatype?: string | null;
}

export interface RequirementJson {
  characteristic: TermJson;
  label: string | null;
}

export interface ServiceMatchJson {
  service: TermJson;
  label: string | null;
  codes: TermJson[];
  matchedSatisfiers: TermJson[];
  requirements: RequirementJson[];
}

export interface BarrierJson {
  client: TermJson;
  service: TermJson;
  unmetCharacteristic: TermJson;
  unmetLabel: string | null;
  removalServiceType: TermJson | null;
}

export interface MatchesResponse {
  client: TermJson;
  matches: ServiceMatchJson[];
}

export interface EligibilityResponse {
  client: TermJson;
  eligible: ServiceMatchJson[];
  barriers: BarrierJson[];
}

export interface TaxonomyClassJson {
  iri: string;
  prefixed: string;
  instances: number;
}

export interface TaxonomyCodeJson {
  code: TermJson;
  codeClass: string;
  label: string | null;
}

export interface ServicesResponse {
  total: number;
  services: ServiceMatchJson[];
  taxonomy: { classes: TaxonomyClassJson[]; codes: TaxonomyCodeJson[] };
  locations: { location: TermJson; label: string | null }[];
  satisfiers: { satisfier: TermJson; label: string | null }[];
}

export interface DemographicRowJson {
  location: TermJson;
  stakeholder: TermJson;
  stakeholderLabel: string | null;
  serviceCode: TermJson | null;
  count: number;
}

export interface DemographicsResponse {
  total: number;
  rows: DemographicRowJson[];
}

export interface GapJson {
  location: TermJson;
  satisfier: TermJson;
  demandingClients: number;
}

export interface DuplicateJson {
  location: TermJson;
  serviceCode: TermJson;
  services: TermJson[];
}

export interface CoverageResponse {
  gaps: GapJson[];
  duplicates: DuplicateJson[];
}

export interface AlternativesResponse {
  services: ServiceMatchJson[];
}

export interface HealthResponse {
  status: string;
  triples: number;
}

export function termId(term: TermJson): string {
  return term.prefixed ?? term.value;
}
