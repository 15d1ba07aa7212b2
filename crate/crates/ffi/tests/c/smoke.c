#include <stdio.h>
#include <string.h>
#include "paritybias.h"

int main(void) {
    PbSeries *po = NULL;
    if (pb_series_build("po", 0, 8, &po) != PB_STATUS_OK) return 1;
    int64_t c = 0;
    if (pb_series_coefficient_i64(po, 8, &c) != PB_STATUS_OK || c != 2) return 2;
    pb_series_free(po);

    bool holds = false;
    char *json = NULL;
    if (pb_verify_theorem("thm_qeu", 0, 60, 60, &holds, &json) != PB_STATUS_OK || !holds) return 3;
    pb_string_free(json);

    PbSeries *bad = NULL;
    if (pb_series_build("p10m", 1, 8, &bad) != PB_STATUS_INVALID_PARAMETER) return 4;
    if (strlen(pb_last_error_message()) == 0) return 5;
    printf("ok %s\n", pb_version());
    return 0;
}
