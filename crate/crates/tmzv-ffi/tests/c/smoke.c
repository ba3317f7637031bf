#include <stdio.h>
#include <string.h>
#include "tmzv.h"

int main(void) {
    TmzvField *f = NULL;
    if (tmzv_field_new(2, &f) != TMZV_STATUS_OK) return 1;
    TmzvReport *r = NULL;
    if (tmzv_mzv(f, "1,3", 30, &r) != TMZV_STATUS_OK) return 2;
    if (!strstr(tmzv_report_json(r), "\"ord\": 2")) return 3;
    tmzv_report_free(r);

    TmzvModule *m = NULL;
    if (tmzv_module_new(f, "3,1", "θ^2,1", &m) != TMZV_STATUS_OK) return 4;
    if (tmzv_module_dim(m) != 5) return 5;
    if (tmzv_module_log(m, 30, &r) != TMZV_STATUS_OK || !tmzv_report_passed(r)) return 6;
    tmzv_report_free(r);
    tmzv_module_free(m);

    TmzvField *bad = NULL;
    unsigned int coeffs[] = {1, 0, 1};
    if (tmzv_field_with_modulus(2, coeffs, 3, &bad) != TMZV_STATUS_REDUCIBLE) return 7;
    if (strlen(tmzv_last_error()) == 0) return 8;
    tmzv_field_free(f);
    puts("ok");
    return 0;
}
