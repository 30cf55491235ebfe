#include <stdio.h>
#include <string.h>

#include "twistram.h"

int main(void) {
    char *norm = NULL;
    if (tw_norm_real(29, 11, &norm) != TW_STATUS_OK || strcmp(norm, "-5818889") != 0) {
        return 1;
    }
    tw_string_free(norm);

    TwBudget budget = tw_budget_default();
    TwCertificate *cert = NULL;
    if (tw_certify(29, 11, &budget, &cert) != TW_STATUS_OK) {
        return 2;
    }
    size_t n = tw_certificate_ramified_count(cert);
    for (size_t i = 0; i < n; i++) {
        char *p = NULL;
        tw_certificate_ramified_prime(cert, i, &p);
        printf("%s%s", i ? " " : "", p);
        tw_string_free(p);
    }
    printf("\n");
    tw_certificate_free(cert);

    if (tw_certify(28, 7, NULL, &cert) != TW_STATUS_HYPOTHESIS) {
        return 3;
    }
    return 0;
}
