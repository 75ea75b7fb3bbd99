/** Shared empty-state wording. */

export const NO_RESULT_NOTICE =
  "If the clustering has not been performed, there is nothing to display.";

export const NO_CLUSTERING_YET = "At this point, no clustering has taken place.";

export const NO_DATA_NOTICE = "No data loaded. Open the Load Data tab first.";
